"""J-characteristics and generalized word counts, computed exactly.

For a factor subset s, the J-characteristic is the integer sum over runs of
the product of the columns in s.  The generalized word count b_k sums
(J_s/N)^2 over all k-subsets; b_1 measures level imbalance, b_2 pairwise
non-orthogonality, b_3 and b_4 the aliasing relevant to two-factor
interaction models.  Everything is accumulated in exact integer arithmetic:
S_k = N^2 b_k is an integer and is what gets stored.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .design import Design
from .errors import BadSubsetError


@dataclass(frozen=True)
class WordCounts:
    """Exact word counts S_k = sum of J_s^2 over |s| = k, for k = 1..k_max."""

    runs: int
    s_k: tuple[int, ...]

    @property
    def k_max(self) -> int:
        return len(self.s_k)

    def s(self, k: int) -> int:
        """S_k as an exact integer; 0 for k beyond k_max (no subsets counted)."""
        if 1 <= k <= len(self.s_k):
            return self.s_k[k - 1]
        return 0

    def b(self, k: int) -> Fraction:
        """b_k = S_k / N^2 as an exact rational."""
        return Fraction(self.s(k), self.runs * self.runs)

    def b_float(self, k: int) -> float:
        return self.s(k) / (self.runs * self.runs)

    def b_all(self) -> tuple[Fraction, ...]:
        return tuple(self.b(k) for k in range(1, self.k_max + 1))


def _check_subset(subset: Sequence[int], m: int) -> tuple[int, ...]:
    sub = tuple(subset)
    if not sub:
        raise BadSubsetError("subset must be nonempty")
    if len(set(sub)) != len(sub):
        raise BadSubsetError(f"duplicated indices in {sub}")
    for j in sub:
        if not 1 <= j <= m:
            raise BadSubsetError(f"factor index {j} out of range 1..{m}")
    return sub


def j_characteristic(d: Design, subset: Sequence[int]) -> int:
    """Sum over runs of the product of the columns in `subset` (1-based indices)."""
    sub = _check_subset(subset, d.factors)
    cols = [j - 1 for j in sub]
    return int(d.entries[:, cols].prod(axis=1).sum())


def word_counts(d: Design, k_max: int | None = None) -> WordCounts:
    """S_k and b_k for k = 1..k_max by exhaustive subset enumeration.

    k_max defaults to min(4, m): the second-order criterion needs b_1..b_4
    only; higher k is available on request for diagnostics.
    """
    m = d.factors
    if k_max is None:
        k_max = min(4, m)
    if not 1 <= k_max <= m:
        raise BadSubsetError(f"k_max must be in 1..{m}, got {k_max}")
    x = d.entries
    s_k = []
    for k in range(1, k_max + 1):
        combos = np.array(list(itertools.combinations(range(m), k)))
        j_vals = x[:, combos].prod(axis=2).sum(axis=0)
        s_k.append(int((j_vals * j_vals).sum()))
    return WordCounts(runs=d.runs, s_k=tuple(s_k))


def word_counts_from_xtx(a: np.ndarray, n_runs: int, m: int) -> WordCounts:
    """Recover word counts from a model-matrix Gram matrix.

    First-order matrices ((m+1) square) yield b_1, b_2.  Second-order
    matrices additionally expose every J value of subsets up to size 4
    through main-by-interaction and interaction-by-interaction entries;
    repeated occurrences of the same subset must agree, which doubles as a
    transcription consistency check on tabulated matrices.
    """
    a = np.asarray(a)
    dim = a.shape[0]
    if a.shape != (dim, dim) or not np.array_equal(a, a.T):
        raise ValueError("information matrix must be square and symmetric")
    first_order = dim == m + 1
    if not first_order and dim != 1 + m + m * (m - 1) // 2:
        raise ValueError(f"matrix size {dim} fits neither model order for m={m}")
    if first_order:
        s1 = int((a[0, 1:] ** 2).sum())
        iu = np.triu_indices(m, 1)
        s2 = int((a[1:, 1:][iu] ** 2).sum())
        return WordCounts(runs=n_runs, s_k=(s1, s2))

    pairs = list(itertools.combinations(range(m), 2))
    index: dict[tuple[int, ...], int] = {(): 0}
    index.update({(j,): 1 + j for j in range(m)})
    index.update({p: 1 + m + k for k, p in enumerate(pairs)})
    j_val: dict[tuple[int, ...], int] = {}

    def record(subset: tuple[int, ...], value: int) -> None:
        if subset in j_val and j_val[subset] != value:
            raise ValueError(
                f"inconsistent J for subset {subset}: {j_val[subset]} vs {value}"
            )
        j_val[subset] = value

    for j in range(m):
        record((j,), int(a[0, 1 + j]))
    for p in pairs:
        record(p, int(a[0, index[p]]))
    for i, j in pairs:
        record((i, j), int(a[1 + i, 1 + j]))
    for i in range(m):
        for p in pairs:
            v = int(a[1 + i, index[p]])
            if i in p:
                other = p[0] if p[1] == i else p[1]
                record((other,), v)
            else:
                record(tuple(sorted((i,) + p)), v)
    for p, q in itertools.combinations(pairs, 2):
        v = int(a[index[p], index[q]])
        if set(p) & set(q):
            record(tuple(sorted(set(p) ^ set(q))), v)
        else:
            record(tuple(sorted(p + q)), v)

    s_k = []
    for k in range(1, min(4, m) + 1):
        s_k.append(
            sum(j_val[s] ** 2 for s in itertools.combinations(range(m), k))
        )
    return WordCounts(runs=n_runs, s_k=tuple(s_k))


def subset_diagnostics(d: Design, k: int) -> Iterator[str]:
    """One line per k-subset, lexicographic: "s1,...,sk J=<int> R=<J^2>/<N^2>"."""
    m = d.factors
    n2 = d.runs * d.runs
    for sub in itertools.combinations(range(1, m + 1), k):
        j = j_characteristic(d, sub)
        yield f"{','.join(str(s) for s in sub)} J={j} R={j * j}/{n2}"
