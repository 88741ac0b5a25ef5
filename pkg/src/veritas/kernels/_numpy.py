"""Pure numpy/Python versions of the compiled kernels (used when numba is off)."""

import numpy as np
import scipy.sparse as sp


def svm_dual_cd_pass(indptr, indices, data, y, qdiag, alpha, w, order, C, bias):
    nb = w.shape[0] - 1
    max_pg = 0.0
    for i in order.tolist():
        lo, hi = indptr[i], indptr[i + 1]
        idx = indices[lo:hi]
        x = data[lo:hi]
        yi = float(y[i])
        g = yi * (float(np.dot(w[idx], x)) + w[nb] * bias) - 1.0
        a = alpha[i]
        if a == 0.0:
            pg = min(g, 0.0)
        elif a == C:
            pg = max(g, 0.0)
        else:
            pg = g
        max_pg = max(max_pg, abs(pg))
        if pg != 0.0:
            na = min(max(a - g / qdiag[i], 0.0), C)
            alpha[i] = na
            d = (na - a) * yi
            if d != 0.0:
                w[idx] += d * x
                w[nb] += d * bias
    return max_pg


def knn_sq_distances(colptr, rowidx, coldata, train_sqnorm, q_indptr, q_indices, q_data):
    n_train = train_sqnorm.shape[0]
    n_query = q_indptr.shape[0] - 1
    dim = colptr.shape[0] - 1
    X = sp.csc_matrix((coldata, rowidx, colptr), shape=(n_train, dim))
    Q = sp.csr_matrix((q_data, q_indices, q_indptr), shape=(n_query, dim))
    dots = np.asarray((Q @ X.T).todense()).reshape(n_query, n_train)
    rows = np.repeat(np.arange(n_query), np.diff(q_indptr))
    qnorm = np.bincount(rows, weights=q_data * q_data, minlength=n_query).astype(np.float64)
    return train_sqnorm[None, :] + qnorm[:, None] - 2.0 * dots, qnorm


def tree_best_split(colptr, rowidx, coldata, labels, in_node, n_pos, n_neg, exact):
    n = n_pos + n_neg
    q_parent = n_pos * n_pos + n_neg * n_neg
    best = None
    for f in range(colptr.shape[0] - 1):
        a, b = colptr[f], colptr[f + 1]
        rows = rowidx[a:b]
        sel = in_node[rows]
        if not sel.any():
            continue
        v = coldata[a:b][sel]
        lab = labels[rows[sel]]
        zp = n_pos - int(np.count_nonzero(lab > 0))
        zn = n_neg - int(np.count_nonzero(lab <= 0))
        if zp + zn:
            v = np.concatenate([v, [0.0]])
            pos = np.concatenate([(lab > 0).astype(np.int64), [zp]])
            neg = np.concatenate([(lab <= 0).astype(np.int64), [zn]])
        else:
            pos = (lab > 0).astype(np.int64)
            neg = (lab <= 0).astype(np.int64)
        order = np.argsort(v, kind="stable")
        v, pos, neg = v[order], pos[order], neg[order]
        uniq, start = np.unique(v, return_index=True)
        if uniq.size < 2:
            continue
        lp = np.add.reduceat(pos, start).cumsum()[:-1]
        ln = np.add.reduceat(neg, start).cumsum()[:-1]
        thr = (uniq[:-1] + uniq[1:]) / 2.0
        nl = lp + ln
        nr = n - nl
        rp = n_pos - lp
        rn = n_neg - ln
        ql = lp * lp + ln * ln
        qr = rp * rp + rn * rn
        num = ql * nr + qr * nl
        den = nl * nr
        if exact:
            nums = [int(x) for x in num]
            dens = [int(x) for x in den]
            j = 0
            for c in range(1, len(nums)):
                if nums[c] * dens[j] > nums[j] * dens[c]:
                    j = c
            if not nums[j] * n > q_parent * dens[j]:
                continue
            if best is None or nums[j] * best[5] > best[4] * dens[j]:
                best = (f, float(thr[j]), int(lp[j]), int(ln[j]), nums[j], dens[j])
        else:
            sf = ql / nl + qr / nr
            j = int(np.argmax(sf))
            if not sf[j] * n > q_parent:
                continue
            if best is None or sf[j] > best[4] / best[5]:
                best = (f, float(thr[j]), int(lp[j]), int(ln[j]), float(sf[j]), 1.0)
    if best is None:
        return -1, 0.0, 0.0, 0, 0
    f, thr, lp, ln, num, den = best
    return f, thr, num / den - q_parent / n, lp, ln
