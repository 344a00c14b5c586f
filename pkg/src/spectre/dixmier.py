"""Singular-value ideal norms and logarithmic trace estimation.

Sequences are non-increasing positive reals encoded as (value, count)
runs; constructors provide vectorized run arrays so partial sums up to
N ~ 1e7 stay cheap.  The trace estimate extrapolates the slowly varying
partial ratio in 1/log N, which the harmonic prototype makes exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._kernels import partial_sums_at


class SingularValueSeq:
    """Lazily enumerated non-increasing positive sequence with
    multiplicity runs.

    `runs_fn(max_terms)` must return (values, counts) arrays covering at
    least max_terms terms.  `kernel_dim` records omitted kernel modes
    (the inverse is taken to vanish on the kernel)."""

    def __init__(self, runs_fn, name="seq", kernel_dim=0):
        self._runs_fn = runs_fn
        self.name = name
        self.kernel_dim = kernel_dim

    def runs(self, max_terms):
        values, counts = self._runs_fn(max_terms)
        values = np.asarray(values, dtype=np.float64)
        counts = np.asarray(counts, dtype=np.int64)
        if len(values) and np.any(np.diff(values) > 0):
            raise ValueError(f"{self.name}: values must be non-increasing")
        if np.any(values <= 0) or np.any(counts < 1):
            raise ValueError(f"{self.name}: needs positive values and "
                             "counts >= 1")
        return values, counts

    def scaled(self, lam):
        fn = self._runs_fn

        def scaled_fn(n):
            v, c = fn(n)
            return np.asarray(v, dtype=np.float64) * lam, c
        return SingularValueSeq(scaled_fn, name=f"{lam}*{self.name}",
                                kernel_dim=self.kernel_dim)

    def with_prefix(self, prefix_values):
        """Replace the first len(prefix_values) terms (finite-rank edit);
        prefix must keep the sequence admissible."""
        fn = self._runs_fn
        pv = np.asarray(sorted(prefix_values, reverse=True), dtype=float)

        def edited(n):
            v, c = fn(n + len(pv))
            values, counts = _drop_terms(v, c, len(pv))
            allv = np.concatenate([pv, values])
            allc = np.concatenate([np.ones(len(pv), dtype=np.int64), counts])
            order = np.argsort(-allv, kind='stable')
            return allv[order], allc[order]
        return SingularValueSeq(edited, name=f"{self.name}+prefix")


def _drop_terms(values, counts, k):
    """Remove the first k terms of a run sequence."""
    counts = counts.copy()
    i = 0
    while k > 0 and i < len(counts):
        take = min(k, counts[i])
        counts[i] -= take
        k -= take
        if counts[i] == 0:
            i += 1
    return values[i:] if i else values, counts[i:] if i else counts


# ----------------------------------------------------------------------
# built-in sequences

def harmonic(shift=1.0):
    def fn(n):
        ks = np.arange(n, dtype=np.float64)
        return 1.0 / (ks + shift), np.ones(n, dtype=np.int64)
    return SingularValueSeq(fn, name="harmonic")


def harmonic_doubled():
    def fn(n):
        nruns = n // 2 + 1
        ks = np.arange(1, nruns + 1, dtype=np.float64)
        return 1.0 / ks, np.full(nruns, 2, dtype=np.int64)
    return SingularValueSeq(fn, name="harmonic-doubled")


def geometric(ratio=0.5):
    def fn(n):
        m = min(n, 900)  # deeper terms would underflow
        ks = np.arange(m, dtype=np.float64)
        v = ratio ** ks
        c = np.ones(m, dtype=np.int64)
        if m < n:  # constant subnormal-free tail so checkpoints resolve
            v = np.append(v, v[-1])
            c = np.append(c, n - m)
        return v, c
    return SingularValueSeq(fn, name="geometric")


def telescoping_log():
    def fn(n):
        ks = np.arange(n, dtype=np.float64)
        return np.log((ks + 2.0) / (ks + 1.0)), np.ones(n, dtype=np.int64)
    return SingularValueSeq(fn, name="telescoping-log")


def block_oscillator():
    """Alternating logarithmic slopes over blocks whose lengths double in
    log scale (boundaries B, B^2, B^4, ...): slope-1 blocks carry 1/n,
    slope-3 blocks carry 3/(n + 2 B_entry), which matches the incoming
    value at each entry so the sequence stays non-increasing while the
    partial ratio oscillates without settling."""
    def fn(n):
        bounds = [8]
        while bounds[-1] < n:
            bounds.append(int(math.ceil(bounds[-1] ** 2)))
        ks = np.arange(1, n + 1, dtype=np.float64)
        vals = 1.0 / ks
        lvl = np.zeros(len(ks), dtype=np.int64)
        for i, b in enumerate(bounds):
            lvl[ks >= b] = i + 1
        for i, b in enumerate(bounds):
            if (i + 1) % 2 == 1:
                sel = lvl == i + 1
                vals[sel] = 3.0 / (ks[sel] + 2.0 * b)
        return vals, np.ones(n, dtype=np.int64)
    return SingularValueSeq(fn, name="block-oscillator")


BUILTINS = {
    "harmonic": harmonic,
    "harmonic-doubled": harmonic_doubled,
    "geometric": geometric,
    "telescoping-log": telescoping_log,
    "block-oscillator": block_oscillator,
}


# ----------------------------------------------------------------------
# norm functionals and the trace estimate

def partial_sum(seq, n):
    """Sum of mu_0..mu_N inclusive (N+1 terms, the displayed convention)."""
    v, c = seq.runs(n + 1)
    return float(partial_sums_at(v, c, np.array([n + 1]))[0])


def partial_sums(seq, ns):
    ns = np.asarray(ns, dtype=np.int64)
    v, c = seq.runs(int(ns.max()) + 1)
    return partial_sums_at(v, c, ns + 1)


def partial_ratio(seq, n):
    """(1/log N) sum_{k=0..N} mu_k."""
    if n < 2:
        raise ValueError("the logarithmic ratio needs N >= 2")
    return partial_sum(seq, n) / math.log(n)


def pinfty_norm(seq, p, n):
    """Partial sup of the (p, infinity) functional up to N (sup over
    N >= 1)."""
    if p <= 1:
        raise ValueError("p must exceed 1")
    if n < 1:
        raise ValueError("N >= 1")
    ns = np.arange(1, n + 1)
    sums = partial_sums(seq, ns)
    return float(np.max(sums / ns ** (1.0 - 1.0 / p)))


def p1_norm(seq, p, n):
    """Partial sum of the (p,1) functional: sum n^(1/p - 1) mu_n; the
    n = 0 term is excluded (its weight is singular as written)."""
    v, c = seq.runs(n + 1)
    terms = np.repeat(v, c)[: n + 1]
    ks = np.arange(1, len(terms), dtype=np.float64)
    return float(np.sum(ks ** (1.0 / p - 1.0) * terms[1:]))


@dataclass
class TraceEstimate:
    value: float
    error_bar: float
    schedule: list
    model: str = "c0 + c1/log N"
    ratios: list = field(default_factory=list)

    def as_dict(self):
        return {"value": self.value, "error_bar": self.error_bar,
                "schedule": list(map(int, self.schedule)),
                "model": self.model}


def dixmier_estimate(seq, schedule):
    """Least-squares fit of the partial ratio against c0 + c1/log N over
    the schedule; the error bar is the largest fit residual."""
    schedule = [int(n) for n in schedule]
    if len(schedule) < 3:
        raise ValueError("schedule needs at least 3 points")
    if any(b <= a for a, b in zip(schedule, schedule[1:])):
        raise ValueError("schedule must increase")
    sums = partial_sums(seq, np.array(schedule))
    logs = np.log(np.array(schedule, dtype=np.float64))
    ratios = sums / logs
    x = 1.0 / logs
    A = np.vstack([np.ones_like(x), x]).T
    coef, *_ = np.linalg.lstsq(A, ratios, rcond=None)
    resid = ratios - A @ coef
    return TraceEstimate(value=float(coef[0]),
                         error_bar=float(np.max(np.abs(resid))),
                         schedule=schedule,
                         ratios=[float(r) for r in ratios])


def default_schedule(top=10**7):
    out = []
    n = 10**4
    while n <= top:
        out.append(n)
        n *= 10
    return out


def is_measurable(seq, tol, top=10**6):
    """Estimates over two interleaved dyadic schedules agree within tol."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    k = 10
    sched_a, sched_b = [], []
    while 2 ** k <= top:
        sched_a.append(2 ** k)
        b = int(2 ** (k + 0.5))
        if b <= top:
            sched_b.append(b)
        k += 2
    ea = dixmier_estimate(seq, sched_a)
    eb = dixmier_estimate(seq, sched_b)
    return abs(ea.value - eb.value) <= tol
