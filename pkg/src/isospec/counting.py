"""End-to-end pipeline for the spectral count N: mesh refinement loop,
threshold handling, Richardson extrapolation, and convergence certification.

At every refinement level the first Dirichlet eigenvalue lambda_1^h is
computed and the Neumann eigenvalues strictly below lambda_1^h * (1 + tie_tol)
are counted by inertia; the tiny positive tie tolerance realizes the <= in the
count, so numerically exact discrete ties land inside.  A report is certified
converged when the count is stable across the final two levels and the nearest
Neumann eigenvalue *above* the counting threshold clears both the remaining
lambda_1 discretization error and the gap's own level-to-level drift by a
factor of ten.  Near-threshold Neumann modes oscillate faster than the
Dirichlet ground state and carry a larger discretization error, so the drift
term is what protects elongated domains from premature certification.
"""

from __future__ import annotations

import io
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import geom
from .eig import count_leq_retry, eigenvalues_near, smallest_eigenvalue
from .errors import IsospecError, ParameterError
from .fem import DIRICHLET, NEUMANN, assemble
from .geom import PlanarDomain
from .mesh import DEFAULT_NODE_CAP, refine, triangulate

CSV_HEADER = "family,param,seed,I,N,lambda1,threshold_gap,h_final,n_dof_final,converged"

TIE_SUSPECT_GAP = 1e-4
_GAP_SAFETY = 10.0


@dataclass(frozen=True)
class SolveOptions:
    """Knobs for compute_N; defaults keep the largest stock problem modest."""

    h0: float | None = None      # initial target edge length; default diameter / 8
    max_levels: int = 6
    tie_rel_tol: float = 1e-8
    degree: int = 1
    node_cap: int = DEFAULT_NODE_CAP


@dataclass(frozen=True)
class LevelRecord:
    h: float
    n_dof: int
    lambda1: float
    count: int


@dataclass(frozen=True)
class SpectralReport:
    """Outcome of one N computation, with its per-level history."""

    domain_label: str
    family: str
    param: object
    seed: object
    iso_ratio: float
    lambda1: float
    count: int
    threshold_gap: float
    levels: tuple
    converged: bool
    flags: tuple = ()
    provenance: dict = field(default_factory=dict)

    def csv_row(self) -> str:
        param = "" if self.param is None else repr(self.param)
        seed = "" if self.seed is None else repr(self.seed)
        level = self.levels[-1] if self.levels else None
        h_final = repr(level.h) if level else ""
        n_dof = str(level.n_dof) if level else ""
        return ",".join([
            self.family, param, seed,
            repr(self.iso_ratio), str(self.count), repr(self.lambda1),
            repr(self.threshold_gap), h_final, n_dof,
            "true" if self.converged else "false",
        ])


def _threshold_gap(neumann_pair, lam1: float, tau: float) -> tuple:
    """(gap_above, gap_any): relative distance from lambda_1 to the nearest
    Neumann eigenvalue above the counting threshold, and to the nearest one
    on either side.

    Eigenvalues at or below tau are counted by the <= convention, so only
    gap_above drives the convergence certificate; gap_any feeds the
    tie-suspect flag (a counted eigenvalue hugging the threshold from below
    is equally fragile under refinement).
    """
    mus = eigenvalues_near(neumann_pair, lam1, k=min(10, neumann_pair.n_dof))
    above = mus[mus > tau]
    gap_above = float(np.min(above - lam1) / lam1) if len(above) else math.inf
    gap_any = float(np.min(np.abs(mus - lam1)) / lam1) if len(mus) else math.inf
    return gap_above, gap_any


def compute_N(domain: PlanarDomain, opts: SolveOptions | None = None) -> SpectralReport:
    """Count Neumann eigenvalues <= lambda_1 on a polygonal domain by FEM."""
    opts = opts or SolveOptions()
    if opts.max_levels < 1:
        raise ParameterError("need at least one refinement level")

    iso = geom.isoperimetric_ratio(domain)
    h0 = opts.h0 if opts.h0 is not None else domain.diameter() / 8.0

    mesh = triangulate(domain, h0, node_cap=opts.node_cap)
    levels: list[LevelRecord] = []
    gaps: list[float] = []
    gap_any = math.inf
    converged = False
    lam_extrap = math.nan

    for level in range(opts.max_levels):
        if level > 0:
            try:
                mesh = refine(mesh, node_cap=opts.node_cap)
            except IsospecError:
                break  # node cap hit: stop refining, report what we have
        dirichlet = assemble(mesh, DIRICHLET, degree=opts.degree)
        neumann = assemble(mesh, NEUMANN, degree=opts.degree)
        lam1, _resid = smallest_eigenvalue(dirichlet)
        tau = lam1 * (1.0 + opts.tie_rel_tol)
        inertia = count_leq_retry(neumann, tau)
        levels.append(LevelRecord(h=mesh.h, n_dof=neumann.n_dof,
                                  lambda1=lam1, count=inertia.n_below))
        gap_above, gap_any = _threshold_gap(neumann, lam1, tau)
        gaps.append(gap_above)

        if len(levels) >= 2:
            lam_f = levels[-1].lambda1
            lam_c = levels[-2].lambda1
            lam_extrap = (4.0 * lam_f - lam_c) / 3.0
            inc_rel = abs(lam_extrap - lam_f) / lam_f
            # relative drift of the gap itself; distant modes capped at 1
            g_f = min(gaps[-1], 1.0)
            g_c = min(gaps[-2], 1.0)
            gap_drift = abs(g_f - g_c) / 3.0
            if (levels[-1].count == levels[-2].count
                    and g_f > _GAP_SAFETY * inc_rel
                    and g_f > _GAP_SAFETY * gap_drift):
                converged = True
                break

    if not levels:
        raise ParameterError("refinement produced no levels")
    final = levels[-1]
    lambda1 = lam_extrap if len(levels) >= 2 else final.lambda1
    gap = gaps[-1]

    flags = []
    if gap_any < TIE_SUSPECT_GAP:
        flags.append("tie-suspect")
    if final.count < 2:
        flags.append("friedlander-violation")
        converged = False

    prov = dict(domain.provenance)
    prov["solver_options"] = {
        "h0": h0, "max_levels": opts.max_levels,
        "tie_rel_tol": opts.tie_rel_tol, "degree": opts.degree,
    }
    return SpectralReport(
        domain_label=domain.label or prov.get("generator", "custom"),
        family=str(prov.get("generator", "custom")),
        param=prov.get("param"),
        seed=prov.get("seed"),
        iso_ratio=iso,
        lambda1=lambda1,
        count=final.count,
        threshold_gap=gap,
        levels=tuple(levels),
        converged=converged,
        flags=tuple(flags),
        provenance=prov,
    )


def _failure_report(domain: PlanarDomain, exc: Exception) -> SpectralReport:
    prov = domain.provenance
    try:
        iso = geom.isoperimetric_ratio(domain)
    except IsospecError:
        iso = math.nan
    return SpectralReport(
        domain_label=domain.label or "custom",
        family=str(prov.get("generator", "custom")),
        param=prov.get("param"),
        seed=prov.get("seed"),
        iso_ratio=iso,
        lambda1=math.nan,
        count=0,
        threshold_gap=math.nan,
        levels=(),
        converged=False,
        flags=(f"error:{type(exc).__name__}",),
        provenance=dict(prov),
    )


def default_workers() -> int:
    env = os.environ.get("ISOSPEC_WORKERS", "")
    if env.strip():
        try:
            return max(1, int(env))
        except ValueError:
            raise ParameterError(f"ISOSPEC_WORKERS must be an integer, got {env!r}")
    return 1


def sweep(family: str, params, opts: SolveOptions | None = None,
          seeds=None, workers: int | None = None) -> list:
    """One report per parameter value (and per seed for the random family),
    in deterministic parameter-major order.  Individual failures become
    non-converged rows; the sweep continues.
    """
    if family not in geom.GENERATORS:
        raise ParameterError(f"unknown family {family!r}")
    gen = geom.GENERATORS[family]

    jobs = []
    if family == "random":
        seed_list = list(seeds) if seeds is not None else [0]
        for p in params:
            for s in seed_list:
                jobs.append((p, s))
    else:
        if seeds:
            raise ParameterError(f"family {family!r} takes no seeds")
        jobs = [(p, None) for p in params]
    if not jobs:
        raise ParameterError("empty parameter range")

    def run(job):
        p, s = job
        try:
            domain = gen(p, s) if s is not None else gen(p)
            return compute_N(domain, opts)
        except Exception as exc:  # recorded per-row, sweep continues
            try:
                domain = gen(p, s) if s is not None else gen(p)
            except Exception:
                return SpectralReport(
                    domain_label=f"{family}({p!r})", family=family, param=p, seed=s,
                    iso_ratio=math.nan, lambda1=math.nan, count=0,
                    threshold_gap=math.nan, levels=(), converged=False,
                    flags=(f"error:{type(exc).__name__}",))
            return _failure_report(domain, exc)

    nworkers = workers if workers is not None else default_workers()
    if nworkers <= 1:
        return [run(job) for job in jobs]
    with ThreadPoolExecutor(max_workers=nworkers) as pool:
        return list(pool.map(run, jobs))


def write_csv(reports, stream) -> None:
    """Emit the report rows with the fixed schema; byte-stable across runs."""
    stream.write(CSV_HEADER + "\n")
    for report in reports:
        stream.write(report.csv_row() + "\n")


def reports_to_csv(reports) -> str:
    buf = io.StringIO()
    write_csv(reports, buf)
    return buf.getvalue()


def reports_to_json(reports) -> str:
    """JSON twin of the CSV schema (same fields, same order, same values)."""
    import json

    docs = []
    for r in reports:
        level = r.levels[-1] if r.levels else None
        docs.append({
            "family": r.family,
            "param": r.param,
            "seed": r.seed,
            "I": r.iso_ratio,
            "N": r.count,
            "lambda1": r.lambda1,
            "threshold_gap": r.threshold_gap,
            "h_final": level.h if level else None,
            "n_dof_final": level.n_dof if level else None,
            "converged": r.converged,
        })
    return json.dumps(docs, indent=2) + "\n"


def spearman_rank_correlation(xs, ys) -> float:
    """Spearman rho between two samples (scipy.stats handles ties)."""
    from scipy.stats import spearmanr

    rho, _p = spearmanr(xs, ys)
    return float(rho)
