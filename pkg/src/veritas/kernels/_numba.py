"""numba-compiled inner loops. Signatures mirror :mod:`veritas.kernels._numpy`."""

import numpy as np
from numba import njit

_JIT = dict(cache=True, nogil=True)


@njit(**_JIT)
def svm_dual_cd_pass(indptr, indices, data, y, qdiag, alpha, w, order, C, bias):
    """One coordinate-descent sweep over the hinge-loss dual.

    ``w`` has one extra trailing slot for the bias weight; every row is
    implicitly augmented with a constant ``bias`` feature.  Returns the
    largest absolute projected gradient seen during the sweep.
    """
    nb = w.shape[0] - 1
    max_pg = 0.0
    for t in range(order.shape[0]):
        i = order[t]
        lo = indptr[i]
        hi = indptr[i + 1]
        s = 0.0
        for p in range(lo, hi):
            s += w[indices[p]] * data[p]
        s += w[nb] * bias
        yi = y[i]
        g = yi * s - 1.0
        a = alpha[i]
        if a == 0.0:
            pg = min(g, 0.0)
        elif a == C:
            pg = max(g, 0.0)
        else:
            pg = g
        if abs(pg) > max_pg:
            max_pg = abs(pg)
        if pg != 0.0:
            na = min(max(a - g / qdiag[i], 0.0), C)
            alpha[i] = na
            d = (na - a) * yi
            if d != 0.0:
                for p in range(lo, hi):
                    w[indices[p]] += d * data[p]
                w[nb] += d * bias
    return max_pg


@njit(**_JIT)
def knn_sq_distances(colptr, rowidx, coldata, train_sqnorm, q_indptr, q_indices, q_data):
    """Squared distances ``|x|^2 + |q|^2 - 2 x.q`` from every query to every training row.

    Dot products are accumulated through the training matrix's CSC index.
    Returns the (n_query, n_train) distance block and the query squared norms.
    """
    n_train = train_sqnorm.shape[0]
    n_query = q_indptr.shape[0] - 1
    out = np.empty((n_query, n_train))
    qnorm = np.zeros(n_query)
    dots = np.zeros(n_train)
    for q in range(n_query):
        dots[:] = 0.0
        qn = 0.0
        for p in range(q_indptr[q], q_indptr[q + 1]):
            j = q_indices[p]
            v = q_data[p]
            qn += v * v
            for r in range(colptr[j], colptr[j + 1]):
                dots[rowidx[r]] += v * coldata[r]
        qnorm[q] = qn
        for i in range(n_train):
            out[q, i] = train_sqnorm[i] + qn - 2.0 * dots[i]
    return out, qnorm


@njit(**_JIT)
def tree_best_split(colptr, rowidx, coldata, labels, in_node, n_pos, n_neg, exact):
    """Best Gini split of the rows flagged in ``in_node``.

    Maximizes ``S = (aL^2+bL^2)/nL + (aR^2+bR^2)/nR`` (equivalently the
    size-weighted impurity decrease).  With ``exact`` the comparison is done
    on int64 cross products so equal-gain candidates tie exactly; the first
    candidate in (feature, threshold) order wins ties.
    Returns (feature, threshold, gain, left_pos, left_neg); feature -1 if no
    split reduces impurity.
    """
    n_features = colptr.shape[0] - 1
    n = n_pos + n_neg
    q_parent = n_pos * n_pos + n_neg * n_neg
    vals = np.empty(n, dtype=np.float64)
    labs = np.empty(n, dtype=np.int8)
    best_f = -1
    best_thr = 0.0
    best_num = 0
    best_den = 1
    best_sf = 0.0
    best_lp = 0
    best_ln = 0
    for f in range(n_features):
        m = 0
        zp = n_pos
        zn = n_neg
        for r in range(colptr[f], colptr[f + 1]):
            row = rowidx[r]
            if in_node[row]:
                vals[m] = coldata[r]
                labs[m] = labels[row]
                if labels[row] > 0:
                    zp -= 1
                else:
                    zn -= 1
                m += 1
        if m == 0:
            continue
        order = np.argsort(vals[:m], kind="mergesort")
        has_zero = zp + zn > 0
        zero_done = not has_zero
        lp = 0
        ln = 0
        prev = 0.0
        started = False
        t = 0
        # walk the distinct values in ascending order, splicing in the zero block
        while t < m or not zero_done:
            if not zero_done and (t >= m or vals[order[t]] > 0.0):
                v = 0.0
                cp = zp
                cn = zn
                zero_done = True
                step = 0
            else:
                v = vals[order[t]]
                cp = 0
                cn = 0
                step = 0
                while t + step < m and vals[order[t + step]] == v:
                    if labs[order[t + step]] > 0:
                        cp += 1
                    else:
                        cn += 1
                    step += 1
                if not zero_done and v == 0.0:
                    cp += zp
                    cn += zn
                    zero_done = True
            if started:
                nl = lp + ln
                nr = n - nl
                ql = lp * lp + ln * ln
                rp = n_pos - lp
                rn = n_neg - ln
                qr = rp * rp + rn * rn
                num = ql * nr + qr * nl
                den = nl * nr
                thr = (prev + v) / 2.0
                if exact:
                    improves = num * n > q_parent * den
                    better = best_f < 0 or num * best_den > best_num * den
                else:
                    sf = ql / nl + qr / nr
                    improves = sf * n > q_parent
                    better = best_f < 0 or sf > best_sf
                if improves and better:
                    best_f = f
                    best_thr = thr
                    best_num = num
                    best_den = den
                    best_sf = ql / nl + qr / nr
                    best_lp = lp
                    best_ln = ln
            lp += cp
            ln += cn
            prev = v
            started = True
            t += step
    gain = 0.0
    if best_f >= 0:
        gain = best_num / best_den - q_parent / n
    return best_f, best_thr, gain, best_lp, best_ln
