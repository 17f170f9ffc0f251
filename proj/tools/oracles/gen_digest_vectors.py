"""Writes multiset digest vectors for all three constructions.

Rows: <construction> <param> <key hex or -> <ops> <serialized digest hex>
where <ops> is a comma list of element:delta with elements in hex ("" allowed).
The first op list is the CLI fixture (three lines, each once).

Usage: gen_digest_vectors.py <registry.json> <output-file>
"""
import json
import sys

from gen_hash_vectors import stream
from gf2m_oracle import FIELDS, Curve, Field, sw_encode

CURVES = {"toy13": (13, 1, 9), "sect163k1": (163, 1, 1), "sect233k1": (233, 0, 1)}

OP_LISTS = [
    [(b"apple", 1), (b"banana", 1), (b"cherry", 1)],
    [(b"apple", 1), (b"banana", -2), (b"cherry", 3), (b"", 1)],
    [(b"x", 5), (b"x", -5)],
]
KEYS = [b"", bytes(range(1, 17))]


def ecmh(name, key, ops):
    m, a, b = CURVES[name]
    F = Field(m, FIELDS[m])
    C = Curve(F, a, b)
    acc = None
    for e, d in ops:
        w = int.from_bytes(stream(key, e, (m + 7) // 8), "little") & ((1 << m) - 1)
        acc = C.add(acc, C.mul(sw_encode(C, w, 2), d))
    return bytes.fromhex(C.compress(acc))[::-1].hex()  # wire order


def muhash(p, key, ops):
    bits = p.bit_length()
    acc = 1
    for e, d in ops:
        x = int.from_bytes(stream(key, e, (bits + 7) // 8), "little") & ((1 << bits) - 1)
        x = x - p if x >= p else x
        x = x or 1
        acc = acc * pow(x, d, p) % p
    return acc.to_bytes((bits + 7) // 8, "big").hex()


def adhash(n, key, ops):
    acc = 0
    for e, d in ops:
        acc += d * int.from_bytes(stream(key, e, n // 8), "little")
    return (acc % (1 << n)).to_bytes(n // 8, "big").hex()


def main(registry, path):
    reg = json.load(open(registry))
    rows = []
    for key in KEYS:
        kh = key.hex() or "-"
        for ops in OP_LISTS:
            oh = ",".join(f"{e.hex()}:{d}" for e, d in ops)
            for name in CURVES:
                rows.append(f"ecmh {name} {kh} {oh} {ecmh(name, key, ops)}")
            for name in ("p1024", "p2048"):
                rows.append(f"muhash {name} {kh} {oh} {muhash(int(reg['muhash'][name]['p'], 16), key, ops)}")
            for n in (128, 256):
                rows.append(f"adhash n{n} {kh} {oh} {adhash(n, key, ops)}")
    with open(path, "w") as f:
        f.write("\n".join(rows) + "\n")


if __name__ == "__main__":
    main(sys.argv[1], sys.argv[2])
