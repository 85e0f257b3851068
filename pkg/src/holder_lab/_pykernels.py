"""Interpreted all-pairs kernel (numpy, row at a time).

``pair_class_table`` tallies, over all pairs ``i < j``, the class of the common
prefix in the source expansion and in the target expansion.  ``src_cls[i, m]``
is the class of the length-``m`` prefix of row ``i``.  Pairs whose expansions
agree over the full width are counted as collisions and skipped.
"""

from __future__ import annotations

import numpy as np


def _lcp(rows: np.ndarray, ref: np.ndarray) -> np.ndarray:
    eq = rows == ref
    # position of the first mismatch, or the full width when none
    return np.where(eq.all(axis=1), rows.shape[1], np.argmin(eq, axis=1))


def pair_class_table(src, src_cls, tgt, tgt_cls, n_src_cls: int, n_tgt_cls: int):
    src, tgt = np.asarray(src), np.asarray(tgt)
    src_cls, tgt_cls = np.asarray(src_cls), np.asarray(tgt_cls)
    P, ls = src.shape
    lt = tgt.shape[1]
    size = n_src_cls * n_tgt_cls
    counts = np.zeros(size, dtype=np.int64)
    first_i = np.full(size, -1, dtype=np.int64)
    first_j = np.full(size, -1, dtype=np.int64)
    collisions = 0
    for i in range(P - 1):
        m = _lcp(src[i + 1 :], src[i])
        m2 = _lcp(tgt[i + 1 :], tgt[i])
        ok = (m < ls) & (m2 < lt)
        collisions += int(ok.size - ok.sum())
        js = np.nonzero(ok)[0]
        keys = src_cls[i, m[js]].astype(np.int64) * n_tgt_cls + tgt_cls[i, m2[js]]
        uniq, idx = np.unique(keys, return_index=True)
        fresh = counts[uniq] == 0
        first_i[uniq[fresh]] = i
        first_j[uniq[fresh]] = i + 1 + js[idx[fresh]]
        counts += np.bincount(keys, minlength=size)
    shape = (n_src_cls, n_tgt_cls)
    return counts.reshape(shape), first_i.reshape(shape), first_j.reshape(shape), collisions
