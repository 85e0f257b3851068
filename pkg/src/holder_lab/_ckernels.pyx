# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled all-pairs kernel; same contract as ``holder_lab._pykernels``."""

import numpy as np
cimport numpy as cnp

cnp.import_array()


def pair_class_table(const int[:, ::1] src, const int[:, ::1] src_cls,
                     const int[:, ::1] tgt, const int[:, ::1] tgt_cls,
                     int n_src_cls, int n_tgt_cls):
    cdef Py_ssize_t P = src.shape[0]
    cdef Py_ssize_t ls = src.shape[1]
    cdef Py_ssize_t lt = tgt.shape[1]
    counts_arr = np.zeros((n_src_cls, n_tgt_cls), dtype=np.int64)
    first_i_arr = np.full((n_src_cls, n_tgt_cls), -1, dtype=np.int64)
    first_j_arr = np.full((n_src_cls, n_tgt_cls), -1, dtype=np.int64)
    cdef long long[:, ::1] counts = counts_arr
    cdef long long[:, ::1] first_i = first_i_arr
    cdef long long[:, ::1] first_j = first_j_arr
    cdef long long collisions = 0
    cdef Py_ssize_t i, j, m, m2
    cdef int a, b
    for i in range(P):
        for j in range(i + 1, P):
            m = 0
            while m < ls and src[i, m] == src[j, m]:
                m += 1
            m2 = 0
            while m2 < lt and tgt[i, m2] == tgt[j, m2]:
                m2 += 1
            if m == ls or m2 == lt:
                collisions += 1
                continue
            a = src_cls[i, m]
            b = tgt_cls[i, m2]
            if counts[a, b] == 0:
                first_i[a, b] = i
                first_j[a, b] = j
            counts[a, b] += 1
    return counts_arr, first_i_arr, first_j_arr, collisions
