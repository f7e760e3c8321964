"""Smoke test for the augucb_py extension module.

Build and install it first:

    pip install --no-build-isolation ./crates/python
"""
import math

import augucb_py as ab


def main():
    arms = [ab.Arm.gaussian(m, 0.25) for m in (0.1, 0.3, 0.45, 0.55, 0.7, 0.9)]
    inst = ab.BanditInstance(arms, 0.5)
    assert inst.num_arms == 6
    assert inst.true_positive_set() == [3, 4, 5]

    stats = ab.ArmStats([1.0, 2.0, 3.0, 4.0])
    assert stats.count == 4 and stats.mean == 2.5 and stats.variance == 1.25
    assert ab.ArmStats().mean is None

    report = inst.complexity()
    assert math.isclose(report.h1, sum(1 / g**2 for g in report.gaps))

    for kind in ab.POLICIES:
        p = ab.Policy(inst, 600, kind, seed=7)
        first = p.step()
        assert first is None or 0 <= first[0] < 6
        p.run()
        assert p.pulls <= 600
        print(f"{kind:7s} pulls={p.pulls:4d} classification={p.classification()}")

    errors = ab.run_single(inst, 600, "augucb", seed=7)
    assert len(errors) == 600 and errors == ab.run_single(inst, 600, "augucb", seed=7)

    curves = ab.run_batch(4, budget=1000, iterations=8, seed=1)
    assert sorted(curves) == sorted(ab.POLICIES)
    assert all(len(c) == 1000 for c in curves.values())

    scenario, roster = ab.make_experiment(6, 3)
    assert scenario.num_arms == 100 and len(roster) == 4

    bounds = ab.theoretical_bounds(inst, 10_000)
    assert math.isclose(bounds["b"], math.sqrt(math.e / 10_000))
    assert ab.target_round(0.5, 0.25) == 3
    assert ab.regret_bound(10_000, report.gaps) > 0

    try:
        ab.regret_bound(10_000, report.gaps, b=1e-4)
    except ab.AugucbError as e:
        print("domain error raised as expected:", e)
    else:
        raise AssertionError("expected AugucbError")

    print("smoke test passed")


if __name__ == "__main__":
    main()
