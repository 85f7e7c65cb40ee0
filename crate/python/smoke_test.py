"""Smoke test for the owl_norm extension.

Build and install first:
    pip install maturin
    maturin build --release -m crates/python/Cargo.toml
    pip install target/wheels/owl_norm-*.whl
then run: python python/smoke_test.py
"""

import math

import owl_norm


def close(a, b, tol=1e-9):
    return all(math.isclose(x, y, abs_tol=tol) for x, y in zip(a, b)) and len(a) == len(b)


def main():
    w = owl_norm.Weights([2.0, 1.0])
    assert owl_norm.norm([1.0, 3.0], w) == 7.0
    assert owl_norm.dual_norm([1.0, 3.0], w) == 1.5
    assert owl_norm.prox([1.0, 3.0], w) == [0.0, 1.0]

    vbar, wbar, sizes = owl_norm.group_and_average([3.0, 2.9], owl_norm.Weights([2.0, 0.0]))
    assert close(vbar, [2.95, 2.95]) and close(wbar, [1.0, 1.0]) and sizes == [2]

    octagon = owl_norm.ball(owl_norm.Weights.oscar(2, 1.0, 0.5))
    assert len(octagon) == 8
    for vertex in octagon:
        assert math.isclose(owl_norm.norm(list(vertex), owl_norm.Weights([1.5, 1.0])), 1.0)

    linf = owl_norm.Weights.linf(4, 1.5)
    assert close(owl_norm.prox([3.0, -1.0, 0.5, 2.0], linf), [1.75, -1.0, 0.5, 1.75])

    result = owl_norm.solve([[1.0, 0.0], [0.0, 1.0]], [1.0, 3.0], owl_norm.Weights.oscar(2, 1.0, 0.5))
    assert result["converged"]
    assert close(result["x"], [0.0, 1.5], 1e-8)
    assert result["relative_gap"] <= 1e-8

    ista = owl_norm.solve([[1.0, 2.0], [3.0, 4.0], [5.0, 7.0]], [1.0, 0.0, 2.0],
                          owl_norm.Weights.l1(2, 0.1), algorithm="ista", step="backtracking")
    assert ista["iterations"] >= 1

    for bad in ([1.0, 2.0], [], [-1.0], [0.0, 0.0]):
        try:
            owl_norm.Weights(bad)
        except ValueError:
            pass
        else:
            raise AssertionError(f"accepted invalid weights {bad}")

    try:
        owl_norm.norm([1.0, 2.0, 3.0], w)
    except ValueError:
        pass
    else:
        raise AssertionError("accepted mismatched dimensions")

    print("owl_norm smoke test passed")


if __name__ == "__main__":
    main()
