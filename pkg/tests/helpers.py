"""Independent oracles shared by the tests.

These evaluate the defining formulas by brute force (explicit unshuffle
enumeration with Koszul signs, tensors of monomials) without going through
the library's splitting machinery.
"""

from collections import defaultdict
from fractions import Fraction

from linfkit.graded import koszul_sign, unshuffles
from linfkit.symcoalg import ONE, clean, mono_degree, normalize_word


def word_product(space, words):
    """Normalize the concatenation of index words into an element."""
    flat = [i for w in words for i in w]
    return normalize_word(space, flat)


def coproduct_oracle(space, mono, parts=2):
    """Reduced iterated coproduct from ``Sh(k_1,..,k_p)`` with Koszul signs."""
    n = len(mono)
    degs = [space.degree(i) for i in mono]
    out = defaultdict(Fraction)

    def compositions(n, p):
        if p == 1:
            if n >= 1:
                yield (n,)
            return
        for k in range(1, n - p + 2):
            for rest in compositions(n - k, p - 1):
                yield (k,) + rest

    for sizes in compositions(n, parts):
        for sigma in unshuffles(list(sizes)):
            eps = koszul_sign(sigma, degs)
            blocks, pos = [], 0
            for k in sizes:
                blocks.append(tuple(mono[s] for s in sigma[pos:pos + k]))
                pos += k
            # each block is already sorted because sigma is increasing inside blocks
            out[tuple(blocks)] += eps
    return clean(out)


def coderivation_oracle(q, mono):
    """``sum_k sum_{Sh(k,n-k)} e(s) q_k(x_s(1..k)) . x_s(k+1..n)``."""
    E = q.source
    n = len(mono)
    degs = [E.degree(i) for i in mono]
    out = defaultdict(Fraction)
    for k in range(1, n + 1):
        for sigma in unshuffles([k, n - k]):
            eps = koszul_sign(sigma, degs)
            head = tuple(mono[s] for s in sigma[:k])
            tail = tuple(mono[s] for s in sigma[k:])
            for (o,), c in q.value(head).items():
                for m, d in word_product(E, [(o,), tail]).items():
                    out[m] += eps * c * d
    return clean(out)


def apply_tensor_left(fn, tensor):
    out = defaultdict(Fraction)
    for (a, b), c in tensor.items():
        for m, v in fn({a: ONE}).items():
            out[(m, b)] += c * v
    return clean(out)


def apply_tensor_right(space, fn, fdeg, tensor):
    out = defaultdict(Fraction)
    for (a, b), c in tensor.items():
        s = -1 if (fdeg & 1) and (mono_degree(space, a) & 1) else 1
        for m, v in fn({b: ONE}).items():
            out[(a, m)] += s * c * v
    return clean(out)


def apply_tensor_both(fn, tensor):
    """``(F (x) F)`` for an even map F."""
    out = defaultdict(Fraction)
    for (a, b), c in tensor.items():
        for m1, v1 in fn({a: ONE}).items():
            for m2, v2 in fn({b: ONE}).items():
                out[(m1, m2)] += c * v1 * v2
    return clean(out)


def coproduct_of(space, x):
    out = defaultdict(Fraction)
    for mono, c in x.items():
        for k, v in coproduct_oracle(space, mono).items():
            out[k] += c * v
    return clean(out)
