"""Gamma-matrix representations with signature, chirality and real
structures.

Conventions: generators obey  g^a g^b + g^b g^a = -2 eta^{ab}  with
eta = diag(+1 x r, -1 x s); the first r generators are anti-Hermitian and
square to -1.  All matrix entries lie in {0, +-1, +-i}, so complex
floating point arithmetic on them is exact.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .wodzicki import trace_gamma_word

MAX_DIM = 12

_S1 = np.array([[0, 1], [1, 0]], dtype=complex)
_S2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
_S3 = np.array([[1, 0], [0, -1]], dtype=complex)


@dataclass(frozen=True)
class Signature:
    r: int
    s: int

    def __post_init__(self):
        if self.r < 0 or self.s < 0 or self.r + self.s < 1:
            raise ValueError("signature needs r, s >= 0 and r + s >= 1")

    @property
    def p(self):
        return self.r + self.s


@dataclass
class GammaSet:
    signature: Signature
    gammas: list                # p complex matrices
    convention: int = -2        # fixed sign of the anticommutator

    @property
    def dim(self):
        return self.gammas[0].shape[0]

    def eta(self, a, b):
        if a != b:
            return 0
        return 1 if a < self.signature.r else -1


@dataclass
class RealStructure:
    p: int
    C: np.ndarray               # J acts as v -> C conj(v)
    eps: int
    eps_prime: int
    eps_double_prime: int | None   # absent for odd p


def _euclidean_gammas(p):
    """Recursive tensor ladder for the Euclidean algebra: start from
    gamma^1 = [i], extend p -> p+2 by (g x s3, 1 x i s1, 1 x i s2); an odd
    top generator is a phase-normalized product of the previous ones."""
    if p == 1:
        return [np.array([[1j]], dtype=complex)]
    if p % 2 == 1:
        base = _euclidean_gammas(p - 1)
        top = np.eye(base[0].shape[0], dtype=complex)
        for g in base:
            top = top @ g
        # normalize so top^2 = -1 and top is anti-Hermitian
        sq = (top @ top)[0, 0]
        if sq == 1:
            top = 1j * top
        return base + [top]
    if p == 2:
        return [1j * _S1, 1j * _S2]
    sub = _euclidean_gammas(p - 2)
    eye = np.eye(sub[0].shape[0], dtype=complex)
    out = [np.kron(g, _S3) for g in sub]
    out.append(np.kron(eye, 1j * _S1))
    out.append(np.kron(eye, 1j * _S2))
    return out


def build_gammas(sig):
    """Deterministic generators for the given signature; the last s
    generators are multiplied by i to flip their squares."""
    if isinstance(sig, tuple):
        sig = Signature(*sig)
    p = sig.p
    if p > MAX_DIM:
        raise ValueError(f"matrix size guard: p = {p} > {MAX_DIM}")
    gammas = _euclidean_gammas(p)
    for k in range(sig.r, p):
        gammas[k] = 1j * gammas[k]
    gs = GammaSet(signature=sig, gammas=gammas)
    _check_gammas(gs)
    return gs


def _check_gammas(gs):
    p = gs.signature.p
    d = gs.dim
    eye = np.eye(d, dtype=complex)
    for a in range(p):
        ga = gs.gammas[a]
        herm = ga.conj().T
        if a < gs.signature.r:
            assert np.array_equal(herm, -ga), f"generator {a} not anti-Hermitian"
        else:
            assert np.array_equal(herm, ga), f"generator {a} not Hermitian"
        for b in range(p):
            anti = ga @ gs.gammas[b] + gs.gammas[b] @ ga
            target = -2 * gs.eta(a, b) * eye
            assert np.array_equal(anti, target), \
                f"anticommutator ({a},{b}) violated"


def chirality(gs):
    """Complex volume form i^[(p+1)/2] g^1 ... g^p for Euclidean sets."""
    if gs.signature.s != 0:
        raise ValueError("chirality defined here for Euclidean signature")
    p = gs.signature.p
    w = np.eye(gs.dim, dtype=complex)
    for g in gs.gammas:
        w = w @ g
    w = (1j) ** ((p + 1) // 2) * w
    eye = np.eye(gs.dim, dtype=complex)
    if p % 2 == 0:
        assert np.array_equal(w @ w, eye)
        for g in gs.gammas:
            assert np.array_equal(w @ g, -g @ w)
    else:
        for g in gs.gammas:
            assert np.array_equal(w @ g, g @ w)
    return w


def _gamma_monomials(gs):
    """The 2^p products of distinct generators, with their index sets."""
    p = gs.signature.p
    d = gs.dim
    out = [((), np.eye(d, dtype=complex))]
    for a in range(p):
        out += [(idx + (a,), m @ gs.gammas[a]) for idx, m in list(out)
                if not idx or idx[-1] < a]
    return out


def _scalar_of(m):
    """c with m = c * Id, else None."""
    d = m.shape[0]
    c = m[0, 0]
    if np.array_equal(m, c * np.eye(d, dtype=complex)):
        return c
    return None


REAL_STRUCTURE_TABLE = {
    0: (1, 1, 1),
    1: (1, -1, None),
    2: (-1, 1, -1),
    3: (-1, 1, None),
    4: (-1, 1, 1),
    5: (-1, -1, None),
    6: (1, 1, -1),
    7: (1, 1, None),
}


def real_structure_candidates(p):
    """All antilinear intertwiners C (from the gamma-monomial algebra,
    unitary, phase-normalized) with C conj(g^a) = s g^a C uniformly in a;
    yields (C, eps, eps_prime, eps_double_prime)."""
    gs = build_gammas(Signature(p, 0))
    omega = chirality(gs) if p % 2 == 0 else None
    found = []
    for idx, m in _gamma_monomials(gs):
        for sgn in (1, -1):
            ok = all(
                np.array_equal(m @ g.conj(), sgn * (g @ m))
                for g in gs.gammas)
            if not ok:
                continue
            eps = _scalar_of(m @ m.conj())
            if eps is None or eps not in (1, -1):
                continue
            C = _normalize_phase(m)
            epp = None
            if omega is not None:
                val = _scalar_of(
                    np.linalg.inv(omega) @ C @ omega.conj() @
                    np.linalg.inv(C))
                epp = int(val.real) if val is not None else None
            found.append((C, int(eps.real) if hasattr(eps, 'real')
                          else int(eps), sgn, epp))
    return found


def _normalize_phase(m):
    flat = m.flatten()
    for z in flat:
        if z != 0:
            return m * (abs(z) / z)
    raise ValueError("zero matrix")


def find_real_structure(p):
    """Charge-conjugation data matching the mod-8 table row; fails loudly
    if no gamma-monomial solution reproduces the tabulated signs."""
    if not (1 <= p <= 8):
        raise ValueError("real structures tabulated for p = 1..8")
    want = REAL_STRUCTURE_TABLE[p % 8]
    cands = real_structure_candidates(p)
    for C, eps, eps_prime, epp in cands:
        if (eps, eps_prime) == want[:2] and (p % 2 == 1 or epp == want[2]):
            rs = RealStructure(p=p, C=C, eps=eps, eps_prime=eps_prime,
                               eps_double_prime=epp if p % 2 == 0 else None)
            _check_real_structure(rs, p)
            return rs
    raise ValueError(
        f"no antilinear solution matches the tabulated signs for p={p}; "
        f"candidates found: {[(e, ep, e2) for _, e, ep, e2 in cands]}")


def _check_real_structure(rs, p):
    gs = build_gammas(Signature(p, 0))
    d = gs.dim
    eye = np.eye(d, dtype=complex)
    assert np.allclose(rs.C @ rs.C.conj(), rs.eps * eye)
    assert np.allclose(rs.C @ rs.C.conj().T, eye), "C not unitary"
    for g in gs.gammas:
        assert np.allclose(rs.C @ g.conj(), rs.eps_prime * g @ rs.C)
    if p % 2 == 0:
        w = chirality(gs)
        assert np.allclose(rs.C @ w.conj(), rs.eps_double_prime * w @ rs.C)


def gamma_word_trace(word, p):
    """Symbolic spinor trace of a gamma word (tuple of index labels;
    a repeated label is a contraction): a delta polynomial times 2^[p/2].
    Odd-length words are traceless."""
    if len(word) > 8:
        raise ValueError("words longer than 8 are not supported")
    return trace_gamma_word(tuple(word), p)


def numeric_word_trace(word, p):
    """Oracle: the same trace from concrete matrices, contracting repeated
    labels by explicit index summation."""
    gs = build_gammas(Signature(p, 0))
    labels = sorted(set(word))
    free = [l for l in labels if word.count(l) == 1]
    dummies = [l for l in labels if word.count(l) == 2]
    if len(free) + 2 * len(dummies) != len(word):
        raise ValueError("labels must appear once or twice")

    def rec(assign, remaining):
        if not remaining:
            m = np.eye(gs.dim, dtype=complex)
            for l in word:
                m = m @ gs.gammas[assign[l]]
            return np.trace(m)
        tot = 0
        for v in range(p):
            assign[remaining[0]] = v
            tot += rec(assign, remaining[1:])
        return tot

    if free:
        raise ValueError("numeric oracle needs fully contracted words")
    return rec({}, dummies)
