"""Weighted binary decision trees with exact split enumeration.

Trees are grown breadth-first.  Feature values are pre-encoded once per
training matrix as integer codes into each column's sorted unique values;
a whole level of nodes is then scored with two ``bincount`` histograms, so
the split search enumerates every candidate threshold exactly (midpoints
between consecutive distinct values present at the node) without per-node
sorting.

Split selection minimizes total weighted child gini.  Equal-score ties
break in favour of the lowest feature index, then the lowest threshold:
candidate features are kept sorted per node and thresholds scan in value
order, so the first argmin hit is the canonical winner.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def gini(pos_weight: float, neg_weight: float) -> float:
    """Binary gini impurity 1 - p^2 - q^2 of a weighted class split."""
    if pos_weight < 0 or neg_weight < 0:
        raise ValueError("class masses must be non-negative")
    total = pos_weight + neg_weight
    if total == 0:
        raise ValueError("gini is undefined when both class masses are zero")
    p = pos_weight / total
    q = neg_weight / total
    return 1.0 - p * p - q * q


def class_weights(y, scheme: str = "balanced") -> tuple[float, float]:
    """Per-class sample weights (w_pos, w_neg).

    Balanced weighting assigns n / (2 * n_c) so both classes carry equal
    total mass; a class with zero samples gets weight 0 (training then
    degenerates to a constant scorer).  Uniform weighting is (1, 1).
    """
    y = np.asarray(y)
    n = y.size
    if n == 0:
        raise ValueError("at least one sample required")
    if scheme == "uniform":
        return (1.0, 1.0)
    if scheme != "balanced":
        raise ValueError(f"unknown class-weight scheme {scheme!r}")
    n_pos = int(np.count_nonzero(y))
    n_neg = n - n_pos
    w_pos = n / (2.0 * n_pos) if n_pos else 0.0
    w_neg = n / (2.0 * n_neg) if n_neg else 0.0
    return (w_pos, w_neg)


@dataclass
class Tree:
    """Flat-array binary tree; ``feature == -1`` marks leaves.

    ``value`` holds each node's weighted positive fraction; prediction
    returns the leaf value reached by descending ``x[feature] <= threshold``.
    """

    feature: np.ndarray  # int32, -1 at leaves
    threshold: np.ndarray  # float64, 0.0 at leaves (never read)
    left: np.ndarray  # int32 child ids, -1 at leaves
    right: np.ndarray
    value: np.ndarray  # float64 weighted positive fraction

    @property
    def n_nodes(self) -> int:
        return int(self.feature.shape[0])

    def predict(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        node = np.zeros(X.shape[0], dtype=np.int32)
        while True:
            interior = self.feature[node] >= 0
            if not interior.any():
                break
            rows = np.nonzero(interior)[0]
            at = node[rows]
            go_left = X[rows, self.feature[at]] <= self.threshold[at]
            node[rows] = np.where(go_left, self.left[at], self.right[at])
        return self.value[node]


def value_codes(X: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Encode each column into codes over its sorted unique values.

    Returns (codes, values, n_values): an (n, d) int32 code matrix, a
    (d, U) padded value table with U = max uniques over columns, and the
    per-column unique counts.
    """
    n, d = X.shape
    codes = np.empty((n, d), dtype=np.int32)
    columns = []
    for j in range(d):
        uniq, inverse = np.unique(X[:, j], return_inverse=True)
        codes[:, j] = inverse
        columns.append(uniq)
    U = max(len(u) for u in columns)
    values = np.empty((d, U), dtype=np.float64)
    n_values = np.empty(d, dtype=np.int64)
    for j, uniq in enumerate(columns):
        values[j, : len(uniq)] = uniq
        values[j, len(uniq) :] = uniq[-1]  # padding, never selected
        n_values[j] = len(uniq)
    return codes, values, n_values


def grow_tree(
    codes: np.ndarray,
    values: np.ndarray,
    y: np.ndarray,
    sample_weight: np.ndarray,
    rows: np.ndarray,
    *,
    max_depth: int,
    min_samples_split: int,
    max_features: int,
    rng: np.random.Generator,
) -> tuple[Tree, np.ndarray]:
    """Grow one tree on the (possibly bootstrapped) ``rows`` of the dataset.

    Returns the tree plus its raw importance vector: per split,
    (weighted node mass / weighted root mass) * gini decrease, accumulated
    on the split feature.
    """
    n_total, d = codes.shape
    U = values.shape[1]
    m = min(max_features, d)

    cb = codes[rows]  # (n_b, d)
    yb = y[rows].astype(np.float64)
    wb = np.asarray(sample_weight, dtype=np.float64)[rows]
    wyb = wb * yb
    n_b = rows.shape[0]
    root_weight = float(wb.sum())

    importance = np.zeros(d, dtype=np.float64)
    level_feature: list[np.ndarray] = []
    level_threshold: list[np.ndarray] = []
    level_left: list[np.ndarray] = []
    level_right: list[np.ndarray] = []
    level_value: list[np.ndarray] = []

    slot = np.zeros(n_b, dtype=np.int64)  # per-sample level slot; -1 once in a leaf
    level_start = 0
    K = 1
    depth = 0

    while K:
        act = np.nonzero(slot >= 0)[0]
        s_slot = slot[act]
        tot = np.bincount(s_slot, weights=wb[act], minlength=K)
        pos = np.bincount(s_slot, weights=wyb[act], minlength=K)
        cnt = np.bincount(s_slot, minlength=K)
        node_value = pos / tot

        can_try = (
            (depth < max_depth)
            & (cnt >= min_samples_split)
            & (pos > 0.0)
            & (tot - pos > 0.0)
        )
        if U < 2:
            can_try[:] = False

        split_mask = np.zeros(K, dtype=bool)
        fbest = np.zeros(K, dtype=np.int64)
        vbest = np.zeros(K, dtype=np.int64)
        tbest = np.zeros(K, dtype=np.float64)

        if can_try.any():
            ct_idx = np.nonzero(can_try)[0]
            Ks = ct_idx.shape[0]
            compact = np.full(K, -1, dtype=np.int64)
            compact[ct_idx] = np.arange(Ks)

            if m < d:
                R = rng.random((Ks, d))
                feats = np.sort(np.argsort(R, axis=1)[:, :m], axis=1)
            else:
                feats = np.broadcast_to(np.arange(d, dtype=np.int64), (Ks, d))

            nc_all = compact[s_slot]
            sel = nc_all >= 0
            rws = act[sel]
            nc = nc_all[sel]

            csub = np.take_along_axis(cb[rws], feats[nc], axis=1)  # (S, m)
            key = (nc[:, None] * m + np.arange(m)[None, :]) * U + csub
            flat = key.ravel()
            nbins = Ks * m * U
            htot = np.bincount(flat, weights=np.repeat(wb[rws], m), minlength=nbins)
            hpos = np.bincount(flat, weights=np.repeat(wyb[rws], m), minlength=nbins)
            htot = htot.reshape(Ks, m, U)
            hpos = hpos.reshape(Ks, m, U)

            ctot = np.cumsum(htot, axis=2)
            cpos = np.cumsum(hpos, axis=2)
            T = ctot[:, :, -1:]
            P = cpos[:, :, -1:]
            lt = ctot[:, :, :-1]
            lp = cpos[:, :, :-1]
            ln = lt - lp
            rt = T - lt
            rp = P - lp
            rn = rt - rp
            with np.errstate(divide="ignore", invalid="ignore"):
                score = (lt - (lp * lp + ln * ln) / lt) + (rt - (rp * rp + rn * rn) / rt)
            valid = (htot[:, :, :-1] > 0) & (rt > 0)
            score = np.where(valid, score, np.inf)

            flat_score = score.reshape(Ks, m * (U - 1))
            bi = np.argmin(flat_score, axis=1)  # first minimum: lowest feature, lowest value
            bscore = flat_score[np.arange(Ks), bi]
            found = np.isfinite(bscore)
            slotpos = bi // (U - 1)
            vcode = bi % (U - 1)
            fb = np.take_along_axis(feats, slotpos[:, None], axis=1)[:, 0]

            # threshold: midpoint between the boundary value and the next value
            # present at the node; clamp to the left value if rounding would
            # cross to the right value, so training and prediction agree
            hrow = htot[np.arange(Ks), slotpos]  # (Ks, U)
            beyond = (np.arange(U)[None, :] > vcode[:, None]) & (hrow > 0)
            vnext = np.argmax(beyond, axis=1)
            a = values[fb, vcode]
            b = values[fb, vnext]
            mid = 0.5 * (a + b)
            thr = np.where(mid < b, mid, a)

            t_node = T[:, 0, 0]
            p_node = P[:, 0, 0]
            g_parent = t_node - (p_node * p_node + (t_node - p_node) ** 2) / t_node
            decrease = np.maximum(g_parent - bscore, 0.0) / root_weight

            split_mask[ct_idx] = found
            fbest[ct_idx] = np.where(found, fb, 0)
            vbest[ct_idx] = np.where(found, vcode, 0)
            tbest[ct_idx] = np.where(found, thr, 0.0)
            np.add.at(importance, fb[found], decrease[found])

        n_split = int(np.count_nonzero(split_mask))
        child_base = level_start + K
        order = np.cumsum(split_mask) - 1  # split rank per node, valid where split_mask

        level_feature.append(np.where(split_mask, fbest, -1).astype(np.int32))
        level_threshold.append(np.where(split_mask, tbest, 0.0))
        level_left.append(np.where(split_mask, child_base + 2 * order, -1).astype(np.int32))
        level_right.append(np.where(split_mask, child_base + 2 * order + 1, -1).astype(np.int32))
        level_value.append(node_value)

        if n_split:
            is_split = split_mask[s_slot]
            csel = cb[act, fbest[s_slot]]
            go_left = csel <= vbest[s_slot]
            new_slot = np.where(is_split, 2 * order[s_slot] + np.where(go_left, 0, 1), -1)
            slot[act] = new_slot
        else:
            slot[act] = -1

        level_start += K
        K = 2 * n_split
        depth += 1

    return (
        Tree(
            feature=np.concatenate(level_feature),
            threshold=np.concatenate(level_threshold),
            left=np.concatenate(level_left),
            right=np.concatenate(level_right),
            value=np.concatenate(level_value),
        ),
        importance,
    )
