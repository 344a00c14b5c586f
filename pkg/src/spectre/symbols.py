"""Abstract-index tensor monomials and the symbol composition engine.

A monomial is coeff * S^k * (commuting tensor factors) * (ordered matrix
factors), where S stands for the squared covector norm at the base point
of a Riemann normal chart.  Tensor factors carry integer index labels; a
label appearing twice in a monomial is contracted, a label appearing once
is free.  Matrix factors (spinor-endomorphism valued coefficients) keep
their order.

Tensor factor kinds
    ('xi', i)            covector component
    ('x', i)             chart coordinate (jets are explicit x-polynomials)
    ('dl', i, j)         Kronecker delta (kept only when both indices free)
    ('R', a, b, c, d)    curvature coefficient of the metric jet; symmetric
                         in (a,b), in (c,d), and under pair exchange
    ('t', a, b, c)       totally antisymmetric torsion components
    ('Rs',)              scalar curvature

Matrix factor kinds: ('a', i), ('da', i, j), ('b',), ('om', i),
('dom', i, j), ('T', i), ('dT', i, j), ('g', i) gamma, ('W', i, j) the
commutator of covariant derivatives (antisymmetric).

Metric jet convention: the engine expands the squared norm as
S - (1/6) R(r0,r1,c0,c1) xi_{r0} xi_{r1} x^{c0} x^{c1}, which realizes the
derivative table rule  d^2/dx^mu dx^nu S^{-1} -> (1/3) R^{..}_{mu nu} xi xi S^{-2}
used throughout the residue computation.
"""

from __future__ import annotations

import functools
import itertools
from fractions import Fraction

from .rationals import GQ, ONE

# Labels >= FRESH_BASE are reserved for transient dummies created while
# building expressions; canonical dummies are relabelled to 0, 1, 2, ...
FRESH_BASE = 1000
_fresh_counter = itertools.count(FRESH_BASE)


def fresh_label():
    return next(_fresh_counter)


class JetExhausted(Exception):
    """A composition requested an x-derivative beyond the stored jet order."""


# ----------------------------------------------------------------------
# monomial canonicalization

def _indices_of(factor):
    return factor[1:]


def _replace_indices(factor, mapping):
    return (factor[0],) + tuple(mapping.get(i, i) for i in factor[1:])


def _r_images(f):
    _, a, b, c, d = f
    out = set()
    for (x, y) in ((a, b), (b, a)):
        for (z, w) in ((c, d), (d, c)):
            out.add(('R', x, y, z, w))
            out.add(('R', z, w, x, y))
    return [(g, 1) for g in out]


def _t_images(f):
    vals = f[1:]
    out = []
    for perm in itertools.permutations(range(len(vals))):
        sign = perm_parity(perm)
        out.append((('t',) + tuple(vals[i] for i in perm), sign))
    return out


def perm_parity(idx):
    """Sign of an integer position permutation."""
    sign = 1
    seen = [False] * len(idx)
    for i in range(len(idx)):
        if seen[i]:
            continue
        j, clen = i, 0
        while not seen[j]:
            seen[j] = True
            j = idx[j]
            clen += 1
        if clen % 2 == 0:
            sign = -sign
    return sign


def _dl_images(f):
    _, i, j = f
    return [(('dl', i, j), 1), (('dl', j, i), 1)]


def _pair_antisym_images(f):
    """Antisymmetry in the middle index pair of (mu, a, b[, nu])."""
    head, mid = f[:2], f[2:4]
    tail = f[4:]
    return [(head + mid + tail, 1),
            (head + (mid[1], mid[0]) + tail, -1)]


_IMAGE_FNS = {
    'R': _r_images,
    't': _t_images,
    'dl': _dl_images,
    'w': _pair_antisym_images,
    'dt': _pair_antisym_images,
    'dw': _pair_antisym_images,
}


def _factor_images(f):
    fn = _IMAGE_FNS.get(f[0])
    if fn is None:
        return [(f, 1)]
    return fn(f)


def _resolve_deltas(tens, mat, dim):
    """Contract deltas against other factors; dl(i,i) contributes a factor
    of `dim` to the returned integer multiplier."""
    tens = list(tens)
    mult = 1
    changed = True
    while changed:
        changed = False
        counts = {}
        for f in tens:
            for i in _indices_of(f):
                counts[i] = counts.get(i, 0) + 1
        for f in mat:
            for i in _indices_of(f):
                counts[i] = counts.get(i, 0) + 1
        for pos, f in enumerate(tens):
            if f[0] != 'dl':
                continue
            _, i, j = f
            if i == j:
                if dim is None:
                    raise ValueError("delta trace requires a dimension")
                mult *= dim
                tens.pop(pos)
                changed = True
                break
            if counts.get(j, 0) > 1:
                tens.pop(pos)
                mapping = {j: i}
                tens = [_replace_indices(g, mapping) for g in tens]
                mat = tuple(_replace_indices(g, mapping) for g in mat)
                changed = True
                break
            if counts.get(i, 0) > 1:
                tens.pop(pos)
                mapping = {i: j}
                tens = [_replace_indices(g, mapping) for g in tens]
                mat = tuple(_replace_indices(g, mapping) for g in mat)
                changed = True
                break
    return tuple(tens), mat, mult


_LIGHT = ('xi', 'x')


def canon_mono(spow, tens, mat, coeff, dim):
    """Canonical (spow, tens, mat, coeff) under dummy renaming, commuting
    factor reordering and the per-factor symmetry groups."""
    if not coeff:
        return None
    res = _canon_cached(spow, tens, mat, dim)
    if res is None:
        return None
    spow, tens, mat, mult, sign = res
    return spow, tens, mat, coeff * GQ(mult * sign)


@functools.lru_cache(maxsize=500_000)
def _canon_cached(spow, tens, mat, dim):
    """Coefficient-independent canonical form: returns
    (spow, tens, mat, integer delta-trace multiplier, sign) or None when
    the monomial cancels against itself.

    Only the "heavy" factors (everything except xi and x) are permuted and
    run through their symmetry images; the totally symmetric xi/x factors
    inherit labels from their attachments, which keeps the search small.
    """
    tens, mat, mult = _resolve_deltas(tens, mat, dim)

    # xi_i xi_i pairs are the squared norm itself
    tens = list(tens)
    changed = True
    while changed:
        changed = False
        seen = {}
        for pos, f in enumerate(tens):
            if f[0] != 'xi':
                continue
            if f[1] in seen:
                other = seen[f[1]]
                for q in sorted((pos, other), reverse=True):
                    tens.pop(q)
                spow = spow + 1
                changed = True
                break
            seen[f[1]] = pos
    tens = tuple(tens)

    counts = {}
    for f in list(tens) + list(mat):
        for i in _indices_of(f):
            counts[i] = counts.get(i, 0) + 1
    dummies = {i for i, c in counts.items() if c == 2}

    heavy = [f for f in tens if f[0] not in _LIGHT]
    light = [f for f in tens if f[0] in _LIGHT]

    # group heavy factors by shape; permute within groups only
    order = sorted(range(len(heavy)),
                   key=lambda k: (heavy[k][0], len(heavy[k])))
    groups = []
    for k in order:
        key = (heavy[k][0], len(heavy[k]))
        if groups and groups[-1][0] == key:
            groups[-1][1].append(k)
        else:
            groups.append((key, [k]))
    per_factor_images = [_factor_images(f) for f in heavy]

    best = None
    best_signs = set()
    group_perms = [list(itertools.permutations(g[1])) for g in groups]
    for perm_choice in itertools.product(*group_perms):
        seq = [k for block in perm_choice for k in block]
        image_lists = [per_factor_images[k] for k in seq]
        for images in itertools.product(*image_lists):
            sign = 1
            factors = []
            for f, s in images:
                sign *= s
                factors.append(f)
            # canonical dummy labels are negative so they can never collide
            # with free labels when sub-expressions are recombined
            mapping = {}
            nxt = -1

            def label(i):
                nonlocal nxt
                if i not in dummies:
                    return i
                if i not in mapping:
                    mapping[i] = nxt
                    nxt -= 1
                return mapping[i]

            relabeled_mat = tuple(
                (f[0],) + tuple(label(i) for i in _indices_of(f))
                for f in mat)
            relabeled_heavy = [
                (f[0],) + tuple(label(i) for i in _indices_of(f))
                for f in factors]
            # light factors attached to already-labelled dummies or free
            # indices; purely light-light pairs get labels pair by pair in
            # a deterministic order
            pending = {}
            fixed_light = []
            for f in light:
                i = f[1]
                if i in dummies and i not in mapping:
                    pending.setdefault(i, []).append(f[0])
                else:
                    fixed_light.append((f[0], label(i)))
            for i, kinds in sorted(pending.items(),
                                   key=lambda kv: tuple(sorted(kv[1]))):
                lab = label(i)
                for kd in kinds:
                    fixed_light.append((kd, lab))
            relabeled_tens = tuple(sorted(relabeled_heavy + fixed_light))
            key = (spow, relabeled_tens, relabeled_mat)
            if best is None or key < best:
                best = key
                best_signs = {sign}
            elif key == best:
                best_signs.add(sign)
    if len(best_signs) == 2:
        # the monomial maps to minus itself under its symmetries
        return None
    spow, tens, mat = best
    return spow, tens, mat, mult, best_signs.pop()


# ----------------------------------------------------------------------
# symbol expressions

class SymbolExpr:
    """Canonicalized sum of tensor monomials over a fixed dimension."""

    __slots__ = ("dim", "terms")

    def __init__(self, dim, terms=None):
        self.dim = dim
        self.terms = dict(terms or {})

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, dim):
        return cls(dim)

    @classmethod
    def mono(cls, dim, coeff=ONE, spow=0, tens=(), mat=()):
        e = cls(dim)
        e._accum(Fraction(spow), tuple(tens), tuple(mat), _gq(coeff))
        return e

    @classmethod
    def const(cls, dim, coeff):
        return cls.mono(dim, coeff=coeff)

    def _accum(self, spow, tens, mat, coeff):
        c = canon_mono(spow, tens, mat, coeff, self.dim)
        if c is None:
            return
        spow, tens, mat, coeff = c
        key = (spow, tens, mat)
        cur = self.terms.get(key)
        new = coeff if cur is None else cur + coeff
        if new:
            self.terms[key] = new
        elif cur is not None:
            del self.terms[key]

    # -- ring ops ------------------------------------------------------
    def __add__(self, other):
        assert self.dim == other.dim
        out = SymbolExpr(self.dim, self.terms)
        for (spow, tens, mat), c in other.terms.items():
            out._accum(spow, tens, mat, c)
        return out

    def __sub__(self, other):
        return self + other.scale(GQ(-1))

    def scale(self, coeff):
        coeff = _gq(coeff)
        out = SymbolExpr(self.dim)
        if not coeff:
            return out
        for (spow, tens, mat), c in self.terms.items():
            out._accum(spow, tens, mat, c * coeff)
        return out

    def __neg__(self):
        return self.scale(GQ(-1))

    def __mul__(self, other):
        """Product; shared free labels contract, dummy labels are kept
        disjoint automatically."""
        assert self.dim == other.dim
        out = SymbolExpr(self.dim)
        for (sp1, t1, m1), c1 in self.terms.items():
            d1 = _dummy_labels(t1, m1)
            map1 = {d: fresh_label() for d in d1}
            t1r = tuple(_replace_indices(f, map1) for f in t1)
            m1r = tuple(_replace_indices(f, map1) for f in m1)
            for (sp2, t2, m2), c2 in other.terms.items():
                d2 = _dummy_labels(t2, m2)
                map2 = {d: fresh_label() for d in d2}
                t2r = tuple(_replace_indices(f, map2) for f in t2)
                m2r = tuple(_replace_indices(f, map2) for f in m2)
                if _xdeg_t(t1r) + _xdeg_t(t2r) > 2:
                    continue
                out._accum(sp1 + sp2, t1r + t2r, m1r + m2r, c1 * c2)
        return out

    # -- structure -----------------------------------------------------
    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, SymbolExpr) and self.dim == other.dim \
            and self.terms == other.terms

    def __hash__(self):
        raise TypeError("unhashable")

    def xi_degree_parts(self):
        """Map xi-homogeneity degree -> sub-expression (x factors count 0)."""
        parts = {}
        for (spow, tens, mat), c in self.terms.items():
            deg = 2 * spow + sum(1 for f in tens if f[0] == 'xi')
            e = parts.setdefault(deg, SymbolExpr(self.dim))
            e._accum(spow, tens, mat, c)
        return parts

    def grade(self, deg):
        return self.xi_degree_parts().get(Fraction(deg), SymbolExpr(self.dim))

    def max_grade(self):
        parts = self.xi_degree_parts()
        return max(parts) if parts else None

    def at_base(self):
        """Drop every monomial carrying an x factor."""
        out = SymbolExpr(self.dim)
        for (spow, tens, mat), c in self.terms.items():
            if _xdeg_t(tens) == 0:
                out._accum(spow, tens, mat, c)
        return out

    def mod_norm(self):
        """Set the squared covector norm to 1 (cosphere restriction)."""
        out = SymbolExpr(self.dim)
        for (spow, tens, mat), c in self.terms.items():
            out._accum(Fraction(0), tens, mat, c)
        return out

    # -- calculus --------------------------------------------------------
    def diff_xi(self, idx):
        out = SymbolExpr(self.dim)
        for (spow, tens, mat), c in self.terms.items():
            if spow:
                # d/dxi_idx S^k = 2 k xi_idx S^(k-1)
                out._accum(spow - 1, tens + (('xi', idx),), mat,
                           c * GQ(2 * spow))
            for pos, f in enumerate(tens):
                if f[0] != 'xi':
                    continue
                rest = tens[:pos] + tens[pos + 1:] + (('dl', idx, f[1]),)
                out._accum(spow, rest, mat, c)
        return out

    def diff_x(self, idx):
        out = SymbolExpr(self.dim)
        for (spow, tens, mat), c in self.terms.items():
            for pos, f in enumerate(tens):
                if f[0] != 'x':
                    continue
                rest = tens[:pos] + tens[pos + 1:] + (('dl', idx, f[1]),)
                out._accum(spow, rest, mat, c)
        return out

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for (spow, tens, mat), c in sorted(
                self.terms.items(), key=lambda kv: str(kv[0])):
            s = [repr(c)]
            if spow:
                s.append(f"S^{spow}")
            s.extend(_fmt_factor(f) for f in tens)
            s.extend(_fmt_factor(f) for f in mat)
            bits.append("*".join(s))
        return " + ".join(bits)


def _fmt_factor(f):
    return f"{f[0]}({','.join(map(str, f[1:]))})"


def _dummy_labels(tens, mat):
    counts = {}
    for f in list(tens) + list(mat):
        for i in _indices_of(f):
            counts[i] = counts.get(i, 0) + 1
    return {i for i, c in counts.items() if c == 2}


def relabel_fresh(tens, mat):
    """Replace the canonical (negative) labels of a decomposed monomial by
    fresh ones so its parts can be recombined without collisions."""
    mapping = {}

    def conv(i):
        if i >= 0:
            return i
        if i not in mapping:
            mapping[i] = fresh_label()
        return mapping[i]

    tens = tuple((f[0],) + tuple(conv(i) for i in f[1:]) for f in tens)
    mat = tuple((f[0],) + tuple(conv(i) for i in f[1:]) for f in mat)
    return tens, mat


def _xdeg_t(tens):
    return sum(1 for f in tens if f[0] == 'x')


def _gq(c):
    if isinstance(c, GQ):
        return c
    return GQ(c)


# ----------------------------------------------------------------------
# composition of symbols

def compose(P, Q, cutoff, x_jet_order=2, drop=None):
    """Symbol of the operator product: sum over multi-indices alpha of
    (-i)^|alpha|/alpha! (d_xi^alpha P)(d_x^alpha Q), truncated below
    `cutoff` xi-degree.

    Implemented as iterated single derivatives summed over ordered index
    tuples, divided by k!; equal to the multi-index form because mixed
    partials commute.  A term that would need an x-derivative beyond the
    stored jet order raises JetExhausted instead of silently truncating.

    `drop(key)` may mark monomials as irrelevant (pruned from the inputs
    and from every intermediate sum).
    """
    assert P.dim == Q.dim
    cutoff = Fraction(cutoff)
    if drop is not None:
        P = _pruned(P, drop)
        Q = _pruned(Q, drop)
    out = SymbolExpr(P.dim)
    p_max = P.max_grade()
    q_max = Q.max_grade()
    if p_max is None or q_max is None:
        return out
    q_has_x = any(f[0] == 'x' for (_, tens, _m) in Q.terms for f in tens)
    k = 0
    Pk = P
    Qk = Q
    pref = ONE
    fact = 1
    while True:
        if p_max - k + q_max < cutoff:
            break
        if k > x_jet_order:
            if Pk.is_zero() or not q_has_x:
                break   # further terms are genuinely absent
            raise JetExhausted(
                f"composition needs {k} x-derivatives; jets stored to "
                f"order {x_jet_order}")
        term = (Pk * Qk).scale(pref * GQ(Fraction(1, fact)))
        for key, c in term.terms.items():
            spow, tens, mat = key
            deg = 2 * spow + sum(1 for f in tens if f[0] == 'xi')
            if deg < cutoff:
                continue
            if drop is not None and drop(key):
                continue
            out._accum(spow, tens, mat, c)
        k += 1
        fact *= k
        pref = pref * GQ(0, -1)
        lab = fresh_label()
        Pk = Pk.diff_xi(lab)
        Qk = Qk.diff_x(lab)
        if drop is not None:
            Pk = _pruned(Pk, drop)
            Qk = _pruned(Qk, drop)
        if Pk.is_zero():
            break
    return out


def _pruned(expr, drop):
    out = SymbolExpr(expr.dim)
    for key, c in expr.terms.items():
        if not drop(key):
            out.terms[key] = c
    return out


# ----------------------------------------------------------------------
# jets of powers of the squared covector norm

def sigma2_pow(dim, k):
    """Jet of (squared covector norm)^k in a Riemann normal chart:
    S^k - (k/6) R(r0,r1,c0,c1) xi xi x x S^(k-1) + O(x^4)."""
    k = Fraction(k)
    r0, r1, c0, c1 = (fresh_label() for _ in range(4))
    e = SymbolExpr.mono(dim, spow=k)
    e._accum(k - 1,
             (('R', r0, r1, c0, c1), ('xi', r0), ('xi', r1),
              ('x', c0), ('x', c1)),
             (),
             GQ(Fraction(-k, 6)))
    return e
