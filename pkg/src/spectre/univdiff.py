"""Universal differential algebra and Hochschild complex over small model
algebras, with the induced commutator representation and junk forms.

Chains are exact: a degree-n chain is a rational linear combination of
word tuples (w0, w1, ..., wn) over the model's commutative word basis,
normal form C_n = A (x) Abar^n (a unit in any slot past the first kills
the term).  Model representations are integer matrices, so every window
identity is checked with exact arithmetic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np


# ----------------------------------------------------------------------
# model algebras

class CircleModel:
    """Cyclic truncation of the smooth circle algebra: words are integer
    powers of the cyclic shift u (an exactly commutative algebra), the
    operator D = diag(0..N-1) so that commutators reproduce the continuum
    identities away from the wrap-around, i.e. on the interior window."""

    def __init__(self, n=48, margin=12, power_cap=2):
        self.n = n
        self.margin = margin
        self.power_cap = power_cap
        self.D = np.diag(np.arange(n)).astype(np.int64)
        self.window = np.arange(margin, n - margin)
        self._shift = np.roll(np.eye(n, dtype=np.int64), -1, axis=0).T

    # word algebra: words are ints k <-> u^k
    unit = 0

    def generators(self):
        return [1, -1]

    def words(self):
        return list(range(-self.power_cap, self.power_cap + 1))

    def mul_words(self, w1, w2):
        return {w1 + w2: Fraction(1)}

    def star_word(self, w):
        return -w

    def pi(self, w):
        return np.linalg.matrix_power(self._shift, w % self.n)

    def reach(self, word_tuple):
        # wrap-around contamination travels this many slots at most
        return sum(abs(w) for w in word_tuple)

    def name(self):
        return "circle"


class DiagonalModel:
    """Commuting diagonal generators with D diagonal in the same basis;
    every commutator with D vanishes, so the junk space is trivial."""

    def __init__(self, n=12, power_cap=3):
        self.n = n
        self.power_cap = power_cap
        self.D = np.diag(np.arange(1, n + 1)).astype(np.int64)
        self.window = np.arange(n)
        self._d = np.diag(np.arange(n) % 3 - 1).astype(np.int64)

    unit = 0

    def generators(self):
        return [1]

    def words(self):
        return list(range(self.power_cap + 1))

    def mul_words(self, w1, w2):
        return {w1 + w2: Fraction(1)}

    def star_word(self, w):
        return w

    def pi(self, w):
        return np.linalg.matrix_power(self._d, w)

    def reach(self, word_tuple):
        return 0

    def name(self):
        return "diagonal"


# ----------------------------------------------------------------------
# chains

@dataclass
class UniversalChain:
    """Formal sum of elementary tensors over a model's word basis."""
    model: object
    degree: int
    terms: dict = field(default_factory=dict)   # tuple(words) -> Fraction

    def copy(self):
        return UniversalChain(self.model, self.degree, dict(self.terms))

    def accum(self, word_tuple, coeff):
        if not coeff:
            return
        if len(word_tuple) != self.degree + 1:
            raise ValueError("degree mismatch")
        # reduced complex: a unit in any differential slot kills the term
        if any(w == self.model.unit for w in word_tuple[1:]):
            return
        cur = self.terms.get(word_tuple, Fraction(0))
        new = cur + coeff
        if new:
            self.terms[word_tuple] = new
        else:
            self.terms.pop(word_tuple, None)

    def __add__(self, other):
        assert self.degree == other.degree
        out = self.copy()
        for wt, c in other.terms.items():
            out.accum(wt, c)
        return out

    def scale(self, c):
        out = UniversalChain(self.model, self.degree)
        for wt, v in self.terms.items():
            out.accum(wt, v * c)
        return out

    def __sub__(self, other):
        return self + other.scale(Fraction(-1))

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return (self.degree == other.degree and self.terms == other.terms)


def chain(model, *word_tuples, coeffs=None):
    if not word_tuples:
        raise ValueError("empty chain needs an explicit degree")
    deg = len(word_tuples[0]) - 1
    out = UniversalChain(model, deg)
    coeffs = coeffs or [Fraction(1)] * len(word_tuples)
    for wt, c in zip(word_tuples, coeffs):
        out.accum(tuple(wt), Fraction(c))
    return out


def hochschild_b(c):
    """Alternating-sum boundary with the cyclic last term."""
    if c.degree < 1:
        raise ValueError("no boundary in degree 0")
    out = UniversalChain(c.model, c.degree - 1)
    m = c.model
    for wt, coeff in c.terms.items():
        n = len(wt) - 1
        for prod, pc in m.mul_words(wt[0], wt[1]).items():
            out.accum((prod,) + wt[2:], coeff * pc)
        for i in range(1, n):
            sign = Fraction(-1) ** i
            for prod, pc in m.mul_words(wt[i], wt[i + 1]).items():
                out.accum(wt[:i] + (prod,) + wt[i + 2:],
                          coeff * pc * sign)
        sign = Fraction(-1) ** n
        for prod, pc in m.mul_words(wt[n], wt[0]).items():
            out.accum((prod,) + wt[1:n], coeff * pc * sign)
    return out


def delta(c):
    """Universal differential: a0 (x) a1 ... -> 1 (x) a0 (x) a1 ...;
    terms whose leading word is the unit are annihilated."""
    out = UniversalChain(c.model, c.degree + 1)
    for wt, coeff in c.terms.items():
        out.accum((c.model.unit,) + wt, coeff)
    return out


def chain_mul_right(c, word):
    """(a0 da1 ... dan) * b in normal form, using da b = d(ab) - a db."""
    m = c.model
    out = UniversalChain(m, c.degree)
    for wt, coeff in c.terms.items():
        for piece, pc in _right_mul_term(m, wt, word):
            out.accum(piece, coeff * pc)
    return out


def _right_mul_term(m, wt, word):
    # (H d(last)) b = H d(last b) - (H last) d(b)
    if len(wt) == 1:
        return [((k,), pc) for k, pc in m.mul_words(wt[0], word).items()]
    head, last = wt[:-1], wt[-1]
    out = []
    for prod, pc in m.mul_words(last, word).items():
        out.append((head + (prod,), pc))
    for piece, pc in _right_mul_term(m, head, last):
        out.append((piece + (word,), -pc))
    return out


def sigma_op(c):
    """sigma(w da) = (-1)^|w| (da) w, expanded to normal form; degree-0
    chains are fixed."""
    if c.degree == 0:
        return c.copy()
    m = c.model
    out = UniversalChain(m, c.degree)
    sign = Fraction(-1) ** (c.degree - 1)
    for wt, coeff in c.terms.items():
        head, a = wt[:-1], wt[-1]
        # (da)(a0 da1 ... ) = d(a a0) da1 ... - a d(a0) da1 ...
        for prod, pc in m.mul_words(a, head[0]).items():
            out.accum((m.unit, prod) + head[1:], coeff * pc * sign)
        out.accum((a,) + head, -coeff * sign)
    return out


def chain_star(c):
    """Involution with (da)* = -d(a*) and (wr)* = r* w*."""
    m = c.model
    n = c.degree
    out = UniversalChain(m, n)
    for wt, coeff in c.terms.items():
        if n == 0:
            out.accum((m.star_word(wt[0]),), coeff)
            continue
        # (a0 da1 ... dan)* = (-1)^n d(an*) ... d(a1*) a0*
        cur = chain(m, (m.unit, m.star_word(wt[n])))
        for j in range(n - 1, 0, -1):
            nxt = UniversalChain(m, cur.degree + 1)
            for wt2, c2 in cur.terms.items():
                nxt.accum(wt2 + (m.star_word(wt[j]),), c2)
            cur = nxt
        cur = chain_mul_right(cur, m.star_word(wt[0]))
        sign = Fraction(-1) ** n
        for wt2, c2 in cur.terms.items():
            out.accum(wt2, coeff * c2 * sign)
    return out


def chain_mul(c1, c2):
    """Graded product in normal form: the leading word of each right-hand
    term multiplies in through the bimodule relation, the differential
    slots concatenate."""
    m = c1.model
    out = UniversalChain(m, c1.degree + c2.degree)
    for wt2, coeff2 in c2.terms.items():
        left = chain_mul_right(c1, wt2[0])
        for wt1, coeff1 in left.terms.items():
            out.accum(wt1 + wt2[1:], coeff1 * coeff2)
    return out


def random_chain(model, degree, rng, nterms=3):
    words = [w for w in model.words()]
    out = UniversalChain(model, degree)
    for _ in range(nterms):
        wt = tuple(rng.choice(words) for _ in range(degree + 1))
        out.accum(wt, Fraction(rng.randint(-3, 3)))
    return out


# ----------------------------------------------------------------------
# representation by commutators

def represent(c, model=None):
    """pi(a0 da1 ... dan) = pi(a0) [D, pi(a1)] ... [D, pi(an)]."""
    m = model or c.model
    size = m.D.shape[0]
    out = np.zeros((size, size), dtype=object)
    margin = getattr(m, 'margin', 0)
    for wt, coeff in c.terms.items():
        if m.reach(wt) > margin and margin:
            raise ValueError("chain reaches past the truncation margin; "
                             "enlarge the model")
        acc = m.pi(wt[0])
        for w in wt[1:]:
            pw = m.pi(w)
            acc = acc @ (m.D @ pw - pw @ m.D)
        out = out + coeff * acc
    return out


def window_part(mat, model):
    w = model.window
    return np.array(mat, dtype=object)[np.ix_(w, w)]


def window_equal(m1, m2, model):
    return np.array_equal(window_part(m1, model), window_part(m2, model))


def window_is_zero(mat, model):
    return not window_part(mat, model).any()


# ----------------------------------------------------------------------
# junk forms

def _window_vector(mat, model):
    return [Fraction(x) for x in window_part(mat, model).flatten().tolist()]


def _rref(rows):
    """Reduced row echelon over the rationals; returns (basis rows, rank)."""
    rows = [list(r) for r in rows]
    ncols = len(rows[0]) if rows else 0
    pivots = []
    rank = 0
    for col in range(ncols):
        piv = None
        for r in range(rank, len(rows)):
            if rows[r][col]:
                piv = r
                break
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = Fraction(1) / rows[rank][col]
        rows[rank] = [x * inv for x in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col]:
                f = rows[r][col]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[rank])]
        pivots.append(col)
        rank += 1
    return rows[:rank], pivots


def _nullspace(rows):
    """Rational nullspace basis of the row matrix."""
    if not rows:
        return []
    basis, pivots = _rref(rows)
    ncols = len(rows[0])
    free = [c for c in range(ncols) if c not in pivots]
    out = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for r, pc in zip(basis, pivots):
            v[pc] = -r[fc]
        out.append(v)
    return out


@dataclass
class JunkBasis:
    degree: int
    matrices: list
    kernel_chains: list


def degree_monomials(model, degree):
    words = model.words()
    nonunit = [w for w in words if w != model.unit]
    return [wt for wt in itertools.product(words, *([nonunit] * degree))]


def junk_basis(model, degree=2):
    """Junk in the given degree: represent d(ker pi) for the kernel of pi
    in degree-1 forms, computed by exact linear algebra on the window."""
    if degree != 2:
        raise ValueError("junk computed in degree 2")
    monos = degree_monomials(model, 1)
    cols = []
    for wt in monos:
        c = chain(model, wt)
        cols.append(_window_vector(represent(c), model))
    kernel = _nullspace([list(row) for row in zip(*cols)]) if cols else []
    # kernel vectors combine the monomials into pi-kernel chains
    junk_rows = []
    kers = []
    for v in kernel:
        ker_chain = UniversalChain(model, 1)
        for coef, wt in zip(v, monos):
            ker_chain.accum(wt, coef)
        kers.append(ker_chain)
        img = represent(delta(ker_chain))
        if not window_is_zero(img, model):
            junk_rows.append((_window_vector(img, model), img))
    basis_rows, _ = _rref([r for r, _ in junk_rows]) if junk_rows else ([], [])
    mats = []
    for row in basis_rows:
        n = len(model.window)
        mats.append(np.array(row, dtype=object).reshape(n, n))
    return JunkBasis(degree=degree, matrices=mats, kernel_chains=kers)


def in_junk_span(mat, jb, model):
    """Exact membership of the window part in the junk span."""
    target = _window_vector(mat, model)
    rows = [[Fraction(x) for x in m.flatten().tolist()] for m in jb.matrices]
    if not rows:
        return not any(target)
    _, piv0 = _rref([list(r) for r in rows])
    _, piv1 = _rref([list(r) for r in rows] + [list(target)])
    return len(piv0) == len(piv1)


def omega1_form(model, a_word, b_word):
    """Normalized trace pairing (da, db) = Trace((da)* db)/M, the trace
    restricted to the window (the full product is formed first so interior
    entries are exact)."""
    da = represent(delta(chain(model, (a_word,))))
    db = represent(delta(chain(model, (b_word,))))
    prod = np.array(da, dtype=object).T @ np.array(db, dtype=object)
    tr = sum(prod[i, i] for i in model.window)
    return Fraction(tr, len(model.window))
