#!/usr/bin/env python3
"""Recheck a finite-quotient certificate using nothing but the JSON itself.

Usage: verify_certificate.py CERT.json
Exit code 0 when the certificate holds, 1 when it does not.

Deliberately independent of the library: permutations and PSL(2, p)
matrices are reimplemented here from scratch.
"""
import json
import re
import sys


def parse_word(text):
    out = []
    for token in text.split():
        name, _, exp = token.partition("^")
        out.append((name, int(exp) if exp else 1))
    return out


def perm_ops(degree):
    identity = tuple(range(degree))

    def parse(text):
        images = list(range(degree))
        for group in re.findall(r"\(([^()]*)\)", text):
            entries = [int(v) - 1 for v in group.split()]
            for k, v in enumerate(entries):
                images[v] = entries[(k + 1) % len(entries)]
        return tuple(images)

    def mul(a, b):
        return tuple(a[b[i]] for i in range(degree))

    def inv(a):
        out = [0] * degree
        for i, v in enumerate(a):
            out[v] = i
        return tuple(out)

    return identity, parse, mul, inv


def psl2_ops(p):
    def canon(m):
        m = tuple(v % p for v in m)
        for v in m:
            if v:
                return tuple((-w) % p for w in m) if v > p // 2 else m
        return m

    identity = canon((1, 0, 0, 1))

    def parse(text):
        a, b, c, d = map(int, re.match(r"\[\[(\d+),(\d+)\],\[(\d+),(\d+)\]\]", text).groups())
        return canon((a, b, c, d))

    def mul(x, y):
        a, b, c, d = x
        e, f, g, h = y
        return canon((a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h))

    def inv(x):
        a, b, c, d = x
        return canon((d, -b, -c, a))

    return identity, parse, mul, inv


def main(path):
    cert = json.load(open(path))
    target = cert["target"]
    if target.startswith("S") or target.startswith("A"):
        identity, parse, mul, inv = perm_ops(int(target[1:]))
    else:
        identity, parse, mul, inv = psl2_ops(int(re.search(r"\d+", target).group()))
    images = {g: parse(s) for g, s in cert["images"].items()}

    def evaluate(word_text):
        acc = identity
        for gen, exp in parse_word(word_text):
            x = images[gen] if exp > 0 else inv(images[gen])
            for _ in range(abs(exp)):
                acc = mul(acc, x)
        return acc

    for relator in cert["presentation"]["relators"]:
        if evaluate(relator) != identity:
            print(f"FAIL: relator {relator!r} does not die")
            return 1
    witness = evaluate(cert["witness"])
    if witness == identity:
        print("FAIL: witness dies in the quotient")
        return 1
    if witness != parse(cert["witness_image"]):
        print("FAIL: recorded witness image does not match")
        return 1
    print(f"OK: witness survives in {target}")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1]))
