import io
import math

import numpy as np
import pytest

import isospec as iso
from isospec.counting import (CSV_HEADER, SolveOptions, reports_to_csv,
                              spearman_rank_correlation)
from isospec.errors import ParameterError


@pytest.fixture(scope="module")
def square_report():
    return iso.compute_N(iso.make_rectangle(1.0))


class TestComputeN:
    def test_unit_square(self, square_report):
        rep = square_report
        assert rep.count == 4
        assert rep.converged
        assert rep.iso_ratio == pytest.approx(16.0)
        assert rep.lambda1 == pytest.approx(2 * math.pi**2, rel=1e-3)

    def test_rectangle_three(self):
        rep = iso.compute_N(iso.make_rectangle(3.0))
        assert rep.count == 6  # 3 + floor(sqrt(10))
        assert rep.converged
        assert rep.iso_ratio == pytest.approx(64.0 / 3.0)

    def test_pentagon(self):
        rep = iso.compute_N(iso.make_regular_polygon(5))
        assert rep.count == 3
        assert rep.converged

    def test_disc_proxy(self):
        rep = iso.compute_N(iso.make_regular_polygon(96))
        assert rep.count == 3
        assert rep.converged
        # disc values: lambda1 -> j_{0,1}^2, I -> 4 pi
        assert rep.lambda1 == pytest.approx(iso.ball_lambda1(2), rel=2e-3)
        assert rep.iso_ratio == pytest.approx(4 * math.pi, rel=1e-3)

    def test_polya_inequality(self, square_report):
        # second Neumann eigenvalue strictly below lambda_1 on converged runs
        msh = iso.triangulate(iso.make_rectangle(1.0), 0.2)
        neumann = iso.assemble(msh, iso.NEUMANN)
        dirichlet = iso.assemble(msh, iso.DIRICHLET)
        lam1, _ = iso.smallest_eigenvalue(dirichlet)
        assert iso.count_leq(neumann, lam1).n_below >= 2

    def test_friedlander_on_reports(self, square_report):
        assert square_report.count >= 2

    def test_scale_invariance_of_count(self):
        base_rep = iso.compute_N(iso.make_comb(2))
        assert base_rep.converged
        for c in (0.1, 7.0):
            rep = iso.compute_N(iso.scaled(iso.make_comb(2), c))
            assert rep.converged
            assert rep.count == base_rep.count
            # lambda_1 scales like c^-2; the count does not
            assert rep.lambda1 == pytest.approx(base_rep.lambda1 / c**2, rel=1e-6)

    def test_levels_recorded(self, square_report):
        assert len(square_report.levels) >= 2
        for lv in square_report.levels:
            assert lv.h > 0 and lv.n_dof > 0 and lv.count >= 0
        hs = [lv.h for lv in square_report.levels]
        assert all(b == pytest.approx(0.5 * a, rel=1e-12) for a, b in zip(hs, hs[1:]))

    def test_tie_suspect_flag_on_rectangle(self, square_report):
        # the (1,1) Neumann mode is an exact continuum tie with lambda_1, so
        # once the mesh resolves it the report is honestly flagged
        assert "tie-suspect" in square_report.flags

    def test_max_levels_respected(self):
        rep = iso.compute_N(iso.make_rectangle(1.0), SolveOptions(max_levels=1))
        assert len(rep.levels) == 1
        assert not rep.converged

    def test_options_validation(self):
        with pytest.raises(ParameterError):
            iso.compute_N(iso.make_rectangle(1.0), SolveOptions(max_levels=0))


class TestSweep:
    def test_rectangle_sweep_matches_closed_form(self):
        reports = iso.sweep("rectangle", [1.0, 2.0, 3.0])
        assert [r.count for r in reports] == [iso.rectangle_N_2d(e) for e in (1, 2, 3)]
        assert all(r.converged for r in reports)

    def test_comb_iso_column(self):
        reports = iso.sweep("comb", [1, 2, 3])
        for rep, m in zip(reports, (1, 2, 3)):
            assert rep.iso_ratio == pytest.approx(36 * m * m / (3 * m - 1), rel=1e-10)

    def test_random_family_rows(self):
        reports = iso.sweep("random", [5, 10], seeds=[0, 1],
                            opts=SolveOptions(max_levels=2))
        assert len(reports) == 4
        assert [(r.param, r.seed) for r in reports] == [(5, 0), (5, 1), (10, 0), (10, 1)]

    def test_failure_recorded_per_row(self):
        reports = iso.sweep("rectangle", [-1.0, 1.0])
        assert len(reports) == 2
        assert not reports[0].converged
        assert any(f.startswith("error:") for f in reports[0].flags)
        assert reports[1].converged

    def test_unknown_family(self):
        with pytest.raises(ParameterError):
            iso.sweep("pentagon", [1])

    def test_seeds_only_for_random(self):
        with pytest.raises(ParameterError):
            iso.sweep("comb", [1], seeds=[0])


class TestCsv:
    def test_header_schema(self):
        assert CSV_HEADER == ("family,param,seed,I,N,lambda1,threshold_gap,"
                              "h_final,n_dof_final,converged")

    def test_row_round_trip(self, square_report):
        text = reports_to_csv([square_report])
        lines = text.strip().split("\n")
        assert lines[0] == CSV_HEADER
        fields = lines[1].split(",")
        assert fields[0] == "rectangle"
        assert float(fields[1]) == 1.0
        assert fields[2] == ""  # no seed
        assert float(fields[3]) == pytest.approx(16.0)
        assert int(fields[4]) == 4
        assert fields[9] == "true"

    def test_byte_identical_reruns(self):
        a = reports_to_csv(iso.sweep("rectangle", [1.0, 2.0]))
        b = reports_to_csv(iso.sweep("rectangle", [1.0, 2.0]))
        assert a == b

    def test_float_repr_round_trips(self, square_report):
        text = reports_to_csv([square_report])
        lam = float(text.strip().split("\n")[1].split(",")[5])
        assert lam == square_report.lambda1


class TestSpearman:
    def test_perfect_monotone(self):
        assert spearman_rank_correlation([1, 2, 3, 4], [10, 20, 30, 40]) == 1.0

    def test_with_ties(self):
        rho = spearman_rank_correlation([3, 3, 4, 5, 8], [12, 14, 16, 20, 30])
        assert 0.9 <= rho <= 1.0


class TestConcurrency:
    def test_worker_pool_order_deterministic(self):
        seq = reports_to_csv(iso.sweep("rectangle", [1.0, 2.0, 3.0], workers=1))
        par = reports_to_csv(iso.sweep("rectangle", [1.0, 2.0, 3.0], workers=3))
        assert seq == par

    def test_workers_env_var(self, monkeypatch):
        from isospec.counting import default_workers

        monkeypatch.setenv("ISOSPEC_WORKERS", "4")
        assert default_workers() == 4
        monkeypatch.setenv("ISOSPEC_WORKERS", "")
        assert default_workers() == 1
        monkeypatch.setenv("ISOSPEC_WORKERS", "zebra")
        with pytest.raises(ParameterError):
            default_workers()


class TestProvenance:
    def test_reports_carry_solver_options(self, square_report):
        opts = square_report.provenance["solver_options"]
        assert opts["tie_rel_tol"] == 1e-8
        assert opts["max_levels"] == 6
        assert opts["degree"] == 1
        assert square_report.provenance["generator"] == "rectangle"
