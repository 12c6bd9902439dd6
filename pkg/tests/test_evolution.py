import random
from fractions import Fraction as F

from ballflow import fixtures
from ballflow.evolution import (
    candidate_grid,
    distinct_types,
    robustness_radius,
    timeline,
    timeline_loci,
)
from ballflow.graph import load_graph
from ballflow.quotient import fingerprint, project

from conftest import relabeled


class TestGrid:
    def test_quarter_steps_up_to_diameter(self, theta_g):
        grid = candidate_grid(theta_g)
        assert grid[0] == F(1, 4)
        assert grid[-1] == theta_g.diameter()
        assert all(b - a == F(1, 4) for a, b in zip(grid, grid[1:]))

    def test_loci_interleave_midpoints(self, path_g):
        loci = timeline_loci(path_g)
        assert loci[0] == (F(1, 8), False)
        radii = [r for r, _ in loci]
        assert radii == sorted(radii)
        assert radii[-1] == path_g.diameter()
        on_grid = [r for r, g_ in loci if g_]
        assert on_grid == candidate_grid(path_g)
        # every consecutive pair of grid points has its midpoint sampled
        for a, b in zip(on_grid, on_grid[1:]):
            assert ((a + b) / 2, False) in loci


class TestTimeline:
    def test_last_entry_is_point(self):
        for name in ["path", "theta", "c6"]:
            g = fixtures.builtin(name)
            t = timeline(g)
            assert t.entries[-1].radius == g.diameter()
            assert t.entries[-1].fingerprint.is_point, name

    def test_first_entry_matches_input_shape(self, theta_g, c6_g, path_g):
        assert timeline(theta_g).entries[0].fingerprint.b1 == 2
        assert timeline(c6_g).entries[0].fingerprint.b1 == 1
        assert timeline(path_g).entries[0].fingerprint.b1 == 0

    def test_injectivity_monotone(self):
        for name in ["path", "theta", "c6"]:
            flags = [e.injective for e in timeline(fixtures.builtin(name)).entries]
            # once injectivity fails it never comes back
            assert flags == sorted(flags, reverse=True), name

    def test_known_critical_times(self, path_g, theta_g, c6_g):
        assert timeline(path_g).critical_times == (F(2),)
        assert timeline(theta_g).critical_times == (F(1), F(2))
        assert timeline(c6_g).critical_times == (F(3),)

    def test_known_type_counts(self, path_g, theta_g, c6_g):
        assert timeline(path_g).distinct_type_count == 2
        assert timeline(theta_g).distinct_type_count == 3
        assert timeline(c6_g).distinct_type_count == 2

    def test_runs_cover_timeline(self, theta_g):
        t = timeline(theta_g)
        runs = t.summary_runs()
        assert runs[0][0] == t.entries[0].radius
        assert runs[-1][1] == theta_g.diameter()
        assert all(a[1] <= b[0] for a, b in zip(runs, runs[1:]))
        assert len(runs) == t.distinct_type_count

    def test_off_grid_constant_between_grid_points(self, theta_g):
        # the shape between consecutive grid points matches the midpoint sample
        t = timeline(theta_g)
        rng = random.Random(4)
        mids = {
            e.radius: e.fingerprint for e in t.entries if not e.on_grid
        }
        for mid, fp in mids.items():
            for _ in range(3):
                off = mid + F(rng.randrange(-7, 8), 64)
                assert fingerprint(project(theta_g, off)).canonical_code == (
                    fp.canonical_code
                ), (mid, off)


class TestDistinctTypes:
    def test_relabeling_invariant(self):
        doc = {
            "name": "h",
            "vertices": ["p", "q", "r", "s"],
            "edges": [
                {"u": "p", "v": "q", "len": "1"},
                {"u": "q", "v": "r", "len": "1"},
                {"u": "r", "v": "s", "len": "1"},
                {"u": "s", "v": "p", "len": "1"},
                {"u": "p", "v": "r", "len": "1"},
            ],
        }
        g = load_graph(doc)
        base = sorted(f.canonical_code for f in distinct_types(g))
        for seed in [7, 8]:
            h = load_graph(relabeled(doc, seed))
            assert sorted(f.canonical_code for f in distinct_types(h)) == base


class TestRobustness:
    def test_path(self, path_g):
        res = robustness_radius(path_g, exact=True)
        assert res.r_star == F(1)
        assert (res.lower, res.upper) == (F(1), F(9, 8))
        assert res.exact == F(17, 16)

    def test_theta(self, theta_g):
        res = robustness_radius(theta_g, exact=True)
        assert res.r_star == F(1)
        assert (res.lower, res.upper) == (F(7, 8), F(1))
        assert res.exact == F(1)

    def test_c6(self, c6_g):
        res = robustness_radius(c6_g, exact=True)
        assert res.r_star == F(3)
        assert (res.lower, res.upper) == (F(23, 8), F(3))
        assert res.exact == F(3)

    def test_bracket_consistency_random(self):
        g = fixtures.random_tree(7, seed=5)
        res = robustness_radius(g, exact=True)
        assert res.lower < res.upper
        assert res.lower < res.exact <= res.upper
        from ballflow.quotient import is_injective

        assert is_injective(g, res.lower)
        assert not is_injective(g, res.upper)
