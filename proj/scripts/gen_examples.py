#!/usr/bin/env python3
"""Generate the bundled structure-constant files from group multiplication tables.

This script is deliberately independent of the C++ code: it builds the
function algebra F(G) and the group algebra C[G] of a finite group G directly
from the group law, and writes them in the JSON structure-constant format.

    python3 scripts/gen_examples.py data/

Tensors are nested arrays of [re, im] pairs.
    mult[i][j][k]   : b_i b_j = sum_k mult[i][j][k] b_k
    comult[i][j][k] : Delta(b_k) = sum_{i,j} comult[i][j][k] b_i (x) b_j
    antipode[i][j]  : S(b_j) = sum_i antipode[i][j] b_i
    star[i][j]      : (b_i)^* = sum_j star[i][j] b_j
"""

import itertools
import json
import os
import sys


def cyclic(n):
    elems = list(range(n))
    return elems, (lambda a, b: (a + b) % n), 0


def symmetric3():
    # permutations of (0,1,2) as tuples, composition (p*q)(x) = p(q(x))
    elems = list(itertools.permutations(range(3)))
    elems.sort()
    def mul(p, q):
        return tuple(p[q[x]] for x in range(3))
    return elems, mul, (0, 1, 2)


def inverse_table(elems, mul, e):
    inv = {}
    for a in elems:
        for b in elems:
            if mul(a, b) == e:
                inv[a] = b
    return inv


def zeros3(n):
    return [[[0.0] * n for _ in range(n)] for _ in range(n)]


def zeros2(n):
    return [[0.0] * n for _ in range(n)]


def function_algebra(name, group):
    elems, mul, e = group
    n = len(elems)
    idx = {g: i for i, g in enumerate(elems)}
    inv = inverse_table(elems, mul, e)
    m = zeros3(n)
    c = zeros3(n)
    for g in elems:
        m[idx[g]][idx[g]][idx[g]] = 1.0
    for a in elems:
        for b in elems:
            c[idx[a]][idx[b]][idx[mul(a, b)]] += 1.0
    unit = [1.0] * n
    counit = [1.0 if g == e else 0.0 for g in elems]
    s = zeros2(n)
    for g in elems:
        s[idx[inv[g]]][idx[g]] = 1.0
    star = zeros2(n)
    for g in elems:
        star[idx[g]][idx[g]] = 1.0
    return dict(name=name, dim=n, mult=m, comult=c, unit=unit, counit=counit,
                antipode=s, star=star)


def group_algebra(name, group):
    elems, mul, e = group
    n = len(elems)
    idx = {g: i for i, g in enumerate(elems)}
    inv = inverse_table(elems, mul, e)
    m = zeros3(n)
    c = zeros3(n)
    for a in elems:
        for b in elems:
            m[idx[a]][idx[b]][idx[mul(a, b)]] = 1.0
    for g in elems:
        c[idx[g]][idx[g]][idx[g]] = 1.0
    unit = [1.0 if g == e else 0.0 for g in elems]
    counit = [1.0] * n
    s = zeros2(n)
    star = zeros2(n)
    for g in elems:
        s[idx[inv[g]]][idx[g]] = 1.0
        star[idx[g]][idx[inv[g]]] = 1.0
    return dict(name=name, dim=n, mult=m, comult=c, unit=unit, counit=counit,
                antipode=s, star=star)


def complexify(x):
    if isinstance(x, list):
        return [complexify(v) for v in x]
    return [float(x), 0.0]


def to_document(alg):
    doc = {"name": alg["name"], "dim": alg["dim"]}
    for key in ("mult", "comult", "unit", "counit", "antipode", "star"):
        doc[key] = complexify(alg[key])
    return doc


def write(path, alg):
    with open(path, "w") as fh:
        json.dump(to_document(alg), fh)
        fh.write("\n")


def main():
    out = sys.argv[1] if len(sys.argv) > 1 else "data"
    os.makedirs(os.path.join(out, "fixtures"), exist_ok=True)
    algebras = {
        "F_Z2": function_algebra("F(Z2)", cyclic(2)),
        "F_Z4": function_algebra("F(Z4)", cyclic(4)),
        "F_S3": function_algebra("F(S3)", symmetric3()),
        "CS3": group_algebra("C[S3]", symmetric3()),
        "CZ2": group_algebra("C[Z2]", cyclic(2)),
    }
    for stem, alg in algebras.items():
        write(os.path.join(out, stem + ".json"), alg)

    broken = function_algebra("F(Z2) with zero antipode", cyclic(2))
    broken["antipode"] = zeros2(2)
    write(os.path.join(out, "fixtures", "F_Z2_zero_antipode.json"), broken)

    s3 = symmetric3()
    corrupted = function_algebra("F(S3) with corrupted antipode", s3)
    # swap two columns of S: S(delta_g) no longer delta_{g^-1} for two elements
    for row in corrupted["antipode"]:
        row[1], row[2] = row[2], row[1]
    write(os.path.join(out, "fixtures", "F_S3_bad_antipode.json"), corrupted)

    # group element orderings, for classical cross-checks in tests
    meta = {
        "F_Z4": {"elements": list(range(4)), "law": "addition mod 4"},
        "F_S3": {"elements": [list(p) for p in sorted(itertools.permutations(range(3)))],
                 "law": "(p*q)(x) = p(q(x))"},
    }
    with open(os.path.join(out, "groups.json"), "w") as fh:
        json.dump(meta, fh, indent=1)
        fh.write("\n")


if __name__ == "__main__":
    main()
