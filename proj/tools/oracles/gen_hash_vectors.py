"""Writes element-hash known-answer vectors from hashlib's BLAKE2.

Rows: <field degree> <key hex or -> <element hex or -> <field element hex>
Plus raw hasher rows: raw <key hex or -> <element hex or -> <output bytes> <output hex>

Usage: gen_hash_vectors.py <output-file>
"""
import hashlib
import random
import sys


def stream(key, data, n):
    if n <= 32:
        return hashlib.blake2s(data, key=key).digest()[:n]
    if n <= 64:
        return hashlib.blake2b(data, key=key).digest()[:n]
    out = b""
    i = 0
    while len(out) < n:
        out += hashlib.blake2b(data + i.to_bytes(4, "little"), key=key).digest()
        i += 1
    return out[:n]


def field_hash(key, data, m):
    raw = stream(key, data, (m + 7) // 8)
    return int.from_bytes(raw, "little") & ((1 << m) - 1)


def h(b):
    return b.hex() if b else "-"


def main(path):
    rng = random.Random(7693)
    rows = []
    for m in (13, 163, 233):
        cases = [(b"", b""), (b"", b"abc"), (bytes(range(32)), b"")]
        while len(cases) < 8:
            key = bytes(rng.getrandbits(8) for _ in range(rng.choice([1, 16, 32])))
            data = bytes(rng.getrandbits(8) for _ in range(rng.randrange(0, 65)))
            cases.append((key, data))
        width = 2 * ((m + 7) // 8)
        for key, data in cases:
            rows.append(f"{m} {h(key)} {h(data)} {field_hash(key, data, m):0{width}x}")
    for n in (32, 48, 64, 100, 200):
        for key in (b"", bytes(range(1, 17))):
            data = b"multiset element"
            rows.append(f"raw {h(key)} {h(data)} {n} {stream(key, data, n).hex()}")
    with open(path, "w") as f:
        f.write("\n".join(rows) + "\n")


if __name__ == "__main__":
    main(sys.argv[1])
