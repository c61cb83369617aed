import numpy as np
import pytest

from answerdiff.tree import Tree, class_weights, gini, grow_tree, value_codes


def test_gini_values():
    assert gini(5, 5) == 0.5
    assert gini(10, 0) == 0.0
    assert gini(3, 1) == 0.375
    with pytest.raises(ValueError):
        gini(0, 0)
    with pytest.raises(ValueError):
        gini(-1, 2)


def test_class_weights_balanced():
    y = np.array([1] * 50 + [0] * 50)
    assert class_weights(y) == (1.0, 1.0)
    y = np.array([1] * 10 + [0] * 90)
    w_pos, w_neg = class_weights(y)
    assert w_pos == 5.0
    assert w_neg == pytest.approx(100 / 180)


def test_class_weights_degenerate_and_uniform():
    assert class_weights(np.zeros(10)) == (0.0, 10 / (2 * 10))
    assert class_weights(np.ones(4), scheme="uniform") == (1.0, 1.0)
    with pytest.raises(ValueError):
        class_weights(np.array([]))
    with pytest.raises(ValueError, match="scheme"):
        class_weights(np.ones(3), scheme="magic")


def grow(X, y, *, weights=None, max_depth=32, min_samples_split=2, max_features=None, seed=0):
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    codes, values, _ = value_codes(X)
    if weights is None:
        weights = np.ones_like(y)
    rng = np.random.default_rng(seed)
    return grow_tree(
        codes,
        values,
        y,
        np.asarray(weights, dtype=np.float64),
        np.arange(X.shape[0]),
        max_depth=max_depth,
        min_samples_split=min_samples_split,
        max_features=max_features or X.shape[1],
        rng=rng,
    )


def test_single_feature_memorization():
    X = np.arange(8.0).reshape(-1, 1)
    y = np.array([0, 1, 1, 0, 1, 0, 0, 1])
    tree, _ = grow(X, y)
    assert tree.predict(X).tolist() == y.tolist()


def test_pure_node_is_leaf():
    X = np.array([[0.0], [1.0], [2.0]])
    y = np.array([1.0, 1.0, 1.0])
    tree, imp = grow(X, y)
    assert tree.n_nodes == 1
    assert tree.feature[0] == -1
    assert tree.value[0] == 1.0
    assert imp.tolist() == [0.0]


def test_constant_features_make_leaf():
    X = np.ones((6, 2))
    y = np.array([0, 1, 0, 1, 0, 1.0])
    tree, _ = grow(X, y)
    assert tree.n_nodes == 1
    assert tree.value[0] == 0.5


def test_max_depth_bound():
    rng = np.random.default_rng(1)
    X = rng.normal(size=(200, 3))
    y = (rng.random(200) < 0.5).astype(float)
    tree, _ = grow(X, y, max_depth=3)

    def depth(node):
        if tree.feature[node] < 0:
            return 0
        return 1 + max(depth(tree.left[node]), depth(tree.right[node]))

    assert depth(0) <= 3


def test_min_samples_split_stops():
    X = np.arange(4.0).reshape(-1, 1)
    y = np.array([0, 1, 0, 1.0])
    tree, _ = grow(X, y, min_samples_split=5)
    assert tree.n_nodes == 1


def test_threshold_between_distinct_values():
    X = np.array([[0.0], [4.0]])
    y = np.array([0.0, 1.0])
    tree, _ = grow(X, y)
    assert tree.feature[0] == 0
    assert tree.threshold[0] == 2.0
    # points on each side of the midpoint route to their own leaves
    assert tree.predict(np.array([[2.0], [2.1]])).tolist() == [0.0, 1.0]


def test_tie_break_lowest_feature_then_lowest_threshold():
    # both features separate perfectly; feature 0 must win
    X = np.array([[0.0, 0.0], [1.0, 1.0], [0.0, 0.0], [1.0, 1.0]])
    y = np.array([0.0, 1.0, 0.0, 1.0])
    tree, _ = grow(X, y)
    assert tree.feature[0] == 0
    # two equally good thresholds on one feature: the lower one wins
    X2 = np.array([[0.0], [1.0], [2.0], [3.0]])
    y2 = np.array([0.0, 0.5, 0.5, 1.0])
    y2 = (y2 >= 0.5).astype(float)  # 0,1,1,1 -> best split after value 0
    tree2, _ = grow(X2, y2)
    assert tree2.threshold[0] == 0.5


def test_leaf_value_weighted_fraction():
    X = np.array([[0.0], [0.0], [1.0], [1.0]])
    y = np.array([1.0, 0.0, 1.0, 1.0])
    weights = np.array([2.0, 1.0, 1.0, 1.0])
    tree, _ = grow(X, y, weights=weights, max_depth=1)
    left = tree.predict(np.array([[0.0]]))[0]
    assert left == pytest.approx(2 / 3)


def test_importance_hand_computed_mdi():
    # y = x0 OR x1 on the four boolean corners, uniform weights:
    # root splits x0 (tie broken to lowest index), left child splits x1
    X = np.array([[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]])
    y = np.array([0.0, 1.0, 1.0, 1.0])
    tree, imp = grow(X, y)
    # root: gini 0.375, children gini (0.5, 0.0) -> decrease (1.0)*(0.375-0.25)
    # left node: weight 1/2, gini 0.5 -> decrease (0.5)*(0.5-0.0)
    assert imp.tolist() == [0.125, 0.25]
    assert tree.predict(X).tolist() == y.tolist()


def test_value_codes_roundtrip():
    X = np.array([[3.0, 1.0], [1.0, 1.0], [3.0, 2.0]])
    codes, values, n_values = value_codes(X)
    assert n_values.tolist() == [2, 2]
    assert values[0, :2].tolist() == [1.0, 3.0]
    rebuilt = values[np.arange(2)[None, :], codes]
    assert np.array_equal(rebuilt, X)


def test_tree_predict_array_layout():
    tree = Tree(
        feature=np.array([0, -1, -1], dtype=np.int32),
        threshold=np.array([0.5, 0.0, 0.0]),
        left=np.array([1, -1, -1], dtype=np.int32),
        right=np.array([2, -1, -1], dtype=np.int32),
        value=np.array([0.5, 0.2, 0.8]),
    )
    X = np.array([[0.0], [1.0]])
    assert tree.predict(X).tolist() == [0.2, 0.8]
