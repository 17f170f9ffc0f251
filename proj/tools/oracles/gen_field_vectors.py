"""Writes field known-answer vectors: a b a*b a^-1 sqrt(a) trace(a) qs(a or a+1).

Usage: gen_field_vectors.py <output-dir>
"""
import os
import random
import sys

from gf2m_oracle import FIELDS, Field


def main(out_dir):
    rng = random.Random(20240613)
    for m in (13, 163, 233):
        F = Field(m, FIELDS[m])
        width = 2 * ((m + 7) // 8)
        with open(os.path.join(out_dir, f"field_gf2_{m}.txt"), "w") as f:
            for _ in range(32):
                a = rng.getrandbits(m) or 1
                b = rng.getrandbits(m)
                # qs column: solve for a or a+1, whichever has trace 0
                c = a if F.trace(a) == 0 else a ^ 1
                cols = [a, b, F.mul(a, b), F.inv(a), F.sqrt(a)]
                line = " ".join(f"{v:0{width}x}" for v in cols)
                f.write(f"{line} {F.trace(a)} {c:0{width}x} {F.qs(c):0{width}x}\n")


if __name__ == "__main__":
    main(sys.argv[1])
