"""Prints the MuHash registry moduli: the largest prime below 2^k."""
import sys
import sympy

for k in (1024, 2048, 3072):
    p = sympy.prevprime(1 << k)
    print(k, hex(p), (1 << k) - p)
    sys.stdout.flush()
