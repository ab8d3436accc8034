"""Reference values for the C++ tests, computed with exact rationals where
possible (fractions) and plain floats otherwise. Run with python3; output is
pasted into the unit tests, never read at test time."""
from fractions import Fraction as F
import math


def aggregate(kind, att, sup):
    if kind == "sum":
        return sum(sup) - sum(att)
    pa = 1
    for s in att:
        pa *= 1 - s
    ps = 1
    for s in sup:
        ps *= 1 - s
    return pa - ps


def linear(w, s, k=1):
    return w - (w / k) * max(0, -s) + ((1 - w) / k) * max(0, s)


def euler(w, s):
    return 1 - (1 - w * w) / (1 + w * math.exp(s))


def pmax(w, s, p=2, k=1):
    def h(x):
        x = max(0, x)
        return x ** p / (1 + x ** p)
    return w - w * h(-s / k) + (1 - w) * h(s / k)


SEMS = {
    "dfquad": ("product", linear),
    "eb": ("sum", euler),
    "qe": ("sum", pmax),
}

# a -> d (support), a -| c, b -> c (support), d -| b
TAU = {"a": F(1, 2), "b": F(3, 5), "c": F(3, 10), "d": F(9, 10)}
ATT = {"a": [], "b": ["d"], "c": ["a"], "d": []}
SUP = {"a": [], "b": [], "c": ["b"], "d": ["a"]}
ORDER = ["a", "d", "b", "c"]

for name, (agg, inf) in SEMS.items():
    sigma = {}
    for x in ORDER:
        s = aggregate(agg, [sigma[y] for y in ATT[x]], [sigma[y] for y in SUP[x]])
        w = TAU[x] if name == "dfquad" else float(TAU[x])
        sigma[x] = inf(w, s)
    print(name, {k: (str(v) if isinstance(v, F) else repr(v)) for k, v in sigma.items()})

# Two arguments attacking each other, base 0.5, DF-QuAD: x = 0.5 - 0.5 y.
print("mutual attack fixed point", F(1, 2) / (1 + F(1, 2)))

print("sum aggregate", aggregate("sum", [F(3, 10)], [F(1, 2), F(1, 5)]))
print("product aggregate", aggregate("product", [F(1, 2)], []))
print("linear(0.5,-0.5)", linear(F(1, 2), F(-1, 2)))
print("euler(0.5, 0.4)", repr(euler(0.5, 0.4)))
print("2-max(0.7, 0.5)", repr(pmax(0.7, 0.5)))
print("2-max(0.7, -2)", repr(pmax(0.7, -2.0)))
