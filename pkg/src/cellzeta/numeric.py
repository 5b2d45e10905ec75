"""Monte Carlo integrals over the standard cell and reference MZV values."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .algebra import LinComb
from .cellforms import composition_xy
from .convergence import is_convergent


@dataclass(frozen=True)
class IntegralEstimate:
    mean: float
    standard_error: float
    samples: int
    seed: int

    def within(self, target: float, sigmas: float = 3.0) -> bool:
        return abs(self.mean - target) <= sigmas * self.standard_error


def _term_arrays(form: LinComb, N: int):
    """Group the terms of a form for vectorized evaluation.

    Returns a list of (coef, pairs) with pairs the consecutive label pairs
    (a, b) of the cycle (w, N) not involving infinity."""
    out = []
    for w, c in form.items():
        cyc = tuple(w) + (N,)
        pairs = []
        for i in range(N):
            a, b = cyc[i], cyc[(i + 1) % N]
            if a == N or b == N:
                continue
            pairs.append((a, b))
        out.append((float(c), pairs))
    return out


def _gap_sums(g: np.ndarray) -> dict:
    """Exact-ish differences x_b - x_a (a < b positions) as sums of gaps.

    Summing gaps directly keeps full relative precision near collisions,
    where the terms of a convergent combination cancel."""
    m = g.shape[1]
    out = {}
    for a in range(m):
        acc = np.zeros(g.shape[0])
        for b in range(a + 1, m + 1):
            acc = acc + g[:, b - 1]
            out[a, b] = acc
    return out


def _evaluate_gaps(form: LinComb, N: int, g: np.ndarray) -> np.ndarray:
    """Cell-function values from the gaps between 0, t_1, ..., t_l, 1.

    Label a sits at position a - 1."""
    diffs = _gap_sums(g)
    total = np.zeros(g.shape[0])
    for c, pairs in _term_arrays(form, N):
        den = np.ones(g.shape[0])
        for a, b in pairs:
            i, j = a - 1, b - 1
            den = den * diffs[i, j] if i < j else -den * diffs[j, i]
        total += c / den
    return total


def evaluate_batch(form: LinComb, N: int, t: np.ndarray) -> np.ndarray:
    """Vectorized cell-function values at rows of t (shape (S, N-3))."""
    S = t.shape[0]
    pts = np.hstack([np.zeros((S, 1)), t, np.ones((S, 1))])
    return _evaluate_gaps(form, N, np.diff(pts, axis=1))


def integrate(form: LinComb, N: int, samples: int = 10 ** 6, seed: int = 0,
              batch: int = 200_000, check: bool = True, method: str = "dirichlet",
              alpha: float = 0.4) -> IntegralEstimate:
    """Monte Carlo estimate of the integral over 0 < t_1 < ... < t_l < 1.

    method="uniform": sorted uniforms, estimate mean(f)/l!. The integrands
    have log singularities where consecutive points collide, and the second
    moment diverges once three or more points collide, so the quoted
    standard error is unreliable from weight 3 on.

    method="dirichlet" (default): the l+1 gaps are drawn from a symmetric
    Dirichlet(alpha) law and each sample is weighted by the exact density
    ratio. The estimator stays unbiased and its variance is finite as long
    as alpha * (block size - 1) < 2 for every colliding block.
    """
    if samples < 10 ** 4:
        raise ValueError("need at least 10^4 samples")
    if check and not is_convergent(form):
        raise ValueError("form is not convergent on the standard cell")
    l = N - 3
    rng = np.random.Generator(np.random.Philox(seed))
    s1 = s2 = 0.0
    done = 0
    # log of the Dirichlet(alpha) normalising constant on l+1 gaps
    lognorm = math.lgamma((l + 1) * alpha) - (l + 1) * math.lgamma(alpha)
    while done < samples:
        m = min(batch, samples - done)
        if method == "uniform":
            t = np.sort(rng.random((m, l)), axis=1)
            f = evaluate_batch(form, N, t) / math.factorial(l)
        elif method == "dirichlet":
            g = rng.dirichlet([alpha] * (l + 1), size=m)
            logq = lognorm + (alpha - 1) * np.log(g).sum(axis=1)
            f = _evaluate_gaps(form, N, g) * np.exp(-logq)
        else:
            raise ValueError(method)
        s1 += f.sum()
        s2 += (f * f).sum()
        done += m
    mean = s1 / samples
    var = max(s2 / samples - mean * mean, 0.0) * samples / (samples - 1)
    return IntegralEstimate(mean, math.sqrt(var / samples), samples, seed)


# --- multiple zeta values ---------------------------------------------------

def _word_to_comp(word: str) -> tuple:
    """x^{n1-1} y ... x^{nr-1} y -> (n1..nr); the word must end in y."""
    out = []
    k = 1
    for ch in word:
        if ch == "x":
            k += 1
        else:
            out.append(k)
            k = 1
    if k != 1:
        raise ValueError("word must end in y")
    return tuple(out)


def polylog(comp: Sequence[int], z: float, terms: int) -> float:
    """Li_{n1..nr}(z) = sum_{k1>..>kr>=1} z^k1 / (k1^n1 ... kr^nr), truncated."""
    if not comp:
        return 1.0
    r = len(comp)
    k = np.arange(1, terms + 1, dtype=float)
    inner = k ** (-float(comp[-1]))
    for j in range(r - 2, -1, -1):
        prev = np.concatenate(([0.0], np.cumsum(inner)[:-1]))
        inner = prev * k ** (-float(comp[j]))
    return float(np.sum(inner * z ** k))


def _dual_word(word: str) -> str:
    return "".join("y" if ch == "x" else "x" for ch in reversed(word))


def mzv_reference(comp: Sequence[int], terms: int = 80, method: str = "split") -> float:
    """zeta(n1,...,nr) = sum_{k1>...>kr>=1} 1/(k1^n1...kr^nr), n1 >= 2.

    method="split" splits the iterated integral at 1/2 (Chen's formula) so
    every piece is a polylog at 1/2; the truncation error of each piece is
    below 2^-terms times a power of log(terms). method="nested" is the
    direct truncated nested sum (error of order log(terms)^r / terms).
    """
    word = composition_xy(comp)
    if method == "nested":
        return polylog(tuple(comp), 1.0, terms)
    if method != "split":
        raise ValueError(method)
    w = len(word)
    total = 0.0
    for j in range(w + 1):
        left = _dual_word(word[:j])
        right = word[j:]
        a = polylog(_word_to_comp(left), 0.5, terms) if left else 1.0
        b = polylog(_word_to_comp(right), 0.5, terms) if right else 1.0
        total += a * b
    return total


def mzv_tail_bound(comp: Sequence[int], terms: int = 80) -> float:
    """Bound on the truncation error of the split method."""
    w = sum(comp)
    return (w + 1) * 4.0 * (1 + math.log(terms)) ** w * 0.5 ** terms


ZETA2 = math.pi ** 2 / 6
