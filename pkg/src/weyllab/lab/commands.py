"""Command registry: parameter schemas, CSV columns, runners and plot rules."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

import numpy as np
from scipy.stats import qmc

from .. import arcs, constructions, core, diophantine, sweep
from ..errors import UsageError


@dataclass
class Context:
    seed: int
    out: Path
    threads: int = 1


@dataclass(frozen=True)
class PlotRule:
    x: str
    y: str
    xlabel: str
    ylabel: str
    group: tuple[str, ...] = ()
    loglog: bool = True
    reference: Callable[[dict], tuple[float, str]] | None = None


@dataclass
class Command:
    name: str
    params: dict[str, Any]
    columns: tuple[str, ...]
    run: Callable[[dict, Context], dict] | None
    ladder: tuple[str, ...] = ("N",)
    plot: PlotRule | None = None
    help: str = ""


REGISTRY: dict[str, Command] = {}


def command(name, params, columns, ladder=("N",), plot=None, help=""):
    def deco(fn):
        REGISTRY[name] = Command(name, params, tuple(columns), fn, tuple(ladder), plot, help)
        return fn
    return deco


def _sobol(dim: int, n: int, seed: int) -> np.ndarray:
    return qmc.Sobol(dim, scramble=True, seed=seed).random(n)


def _vec(v, d: int, name: str) -> list[float]:
    v = list(np.atleast_1d(v))
    if len(v) != d:
        raise UsageError(f"params.{name}: expected {d} components, got {len(v)}")
    return [float(a) for a in v]


def _shape(p: dict) -> core.TorusShape | None:
    if not p.get("betas"):
        return None
    return core.TorusShape(tuple(float(b) for b in p["betas"]))


def max_lp_exponent(d: int, p: float) -> float:
    if p <= 2 * (d + 1) / d:
        return d / 2 + d / (2 * (d + 1))
    return d - d / p


# ---------------------------------------------------------------- evaluation

@command("eval", dict(N=16, d=1, x=[0.0], t=0.0, r=[], betas=[]),
         ("N", "d", "kind", "x", "t", "re", "im", "abs"),
         help="evaluate the Weyl sum at one point")
def _eval(p, ctx):
    d = p["d"]
    x = _vec(p["x"], d, "x")
    pt = core.TorusPoint.wrap(x, p["t"])
    if p["betas"]:
        w, kind = core.weyl_generic(pt, p["N"], _shape(p)), "generic"
    elif p["r"]:
        w, kind = core.weyl_rational_line(pt.x, pt.t, _vec(p["r"], d, "r"), p["N"]), "rational"
    else:
        w, kind = core.weyl_dd(pt, p["N"]), "standard"
    return dict(N=p["N"], d=d, kind=kind, x=x, t=pt.t, re=w.real, im=w.imag, abs=abs(w))


@command("sup", dict(N=64, d=1, x=[0.5], tol_rel=1e-3, r=[], betas=[]),
         ("N", "d", "x", "t_star", "value", "error_radius"),
         help="certified sup over t at one x")
def _sup(p, ctx):
    d = p["d"]
    x = _vec(p["x"], d, "x")
    r = _vec(p["r"], d, "r") if p["r"] else None
    s = sweep.sup_over_t(x, p["N"], d, p["tol_rel"], r=r, shape=_shape(p))
    return dict(N=p["N"], d=d, x=x, t_star=s.t_star, value=s.value, error_radius=s.error_radius)


@command("field", dict(N=64, d=1, M=0, tol_rel=0.25, r=[], betas=[], cell_centered=True),
         ("N", "d", "M", "T", "max_value", "mean_value", "max_error_radius", "file"),
         help="maximal function on a grid (arrays saved as .npz)")
def _field(p, ctx):
    d = p["d"]
    r = _vec(p["r"], d, "r") if p["r"] else None
    f = sweep.maximal_field(p["N"], d, p["M"] or None, p["tol_rel"], r=r, shape=_shape(p),
                            cell_centered=p["cell_centered"])
    path = ctx.out / "fields" / f"field_N{p['N']}_d{d}_M{f.M}.npz"
    path.parent.mkdir(parents=True, exist_ok=True)
    np.savez_compressed(path, value=f.value, t_star=f.t_star, error_radius=f.error_radius)
    return dict(N=p["N"], d=d, M=f.M, T=f.T, max_value=float(f.value.max()),
                mean_value=float(f.value.mean()), max_error_radius=float(f.error_radius.max()),
                file=str(path.relative_to(ctx.out)))


# ---------------------------------------------------------------- norms and level sets

@command("lpnorm", dict(N=64, d=1, p=4.0, M0=0, rel_tol=0.01, max_doublings=4, tol_rel=0.25,
                        r=[], betas=[]),
         ("N", "d", "p", "kind", "M_final", "value", "upper", "converged", "flag"),
         plot=PlotRule("N", "value", "N", "||sup_t |w_N| ||_p", ("d", "p", "kind"),
                       reference=lambda g: (max_lp_exponent(g["d"], g["p"]), "reference slope")),
         help="L^p norm of the maximal function on an M-doubling ladder")
def _lpnorm(p, ctx):
    d = p["d"]
    r = _vec(p["r"], d, "r") if p["r"] else None
    res = sweep.lp_norm_of_maximal(p["N"], d, p["p"], p["M0"] or None, rel_tol=p["rel_tol"],
                                   max_doublings=p["max_doublings"], tol_rel=p["tol_rel"],
                                   r=r, shape=_shape(p))
    return dict(N=p["N"], d=d, p=res.p, kind=res.kind, M_final=res.ladder[-1][0],
                value=res.value, upper=res.upper, converged=res.converged,
                flag="" if res.converged else "not_converged",
                ladder=[list(step) for step in res.ladder])


@command("levelset", dict(N=128, d=1, alpha=0.85, eta=0.05, M=0, cell_centered=True),
         ("N", "d", "alpha", "eta", "M", "cell_count", "cell_volume", "measure"),
         plot=PlotRule("N", "measure", "N", "|S_alpha(N)|", ("d", "alpha"),
                       reference=lambda g: ((g["d"] + 2) - 2 * (g["d"] + 1) * g["alpha"] / g["d"],
                                            "reference slope")),
         help="measure of the level set of the maximal function")
def _levelset(p, ctx):
    est = sweep.level_set_measure(p["N"], p["d"], p["alpha"], p["eta"], M=p["M"] or None,
                                  cell_centered=p["cell_centered"])
    return dict(N=est.N, d=est.d, alpha=est.alpha, eta=est.eta, M=est.M,
                cell_count=est.cell_count, cell_volume=est.cell_volume, measure=est.measure)


@command("rects", dict(N=128, d=1, alpha=0.9, C=1.0),
         ("N", "d", "alpha", "C", "tiles_x", "tiles_t", "flagged", "count", "bound_exponent",
          "realized_constant", "d_dimensional"),
         plot=PlotRule("N", "count", "N", "family size", ("d", "alpha"),
                       reference=lambda g: ((g["d"] ** 2 + 2 * g["d"] + 2) * (1 - g["alpha"] / g["d"]),
                                            "reference slope")),
         help="rectangle family with at most two tiles per x-column")
def _rects(p, ctx):
    R = sweep.rect_family_count(p["N"], p["d"], p["alpha"], p["C"])
    return dict(N=R.N, d=R.d, alpha=R.alpha, C=R.C, tiles_x=R.tiles_x, tiles_t=R.tiles_t,
                flagged=R.flagged, count=R.count, bound_exponent=R.bound_exponent,
                realized_constant=R.realized_constant, d_dimensional=R.d_dimensional)


@command("strichartz", dict(N=4, d=1, p=6.0, method="auto"),
         ("N", "d", "p", "norm", "exact_count", "flag"),
         plot=PlotRule("N", "norm", "N", "||w_N||_p", ("d", "p"),
                       reference=lambda g: (g["d"] / 2, "reference slope")),
         help="space-time L^p norm, exact count or grid quadrature")
def _strichartz(p, ctx):
    s = sweep.strichartz_norm(p["N"], p["d"], p["p"], p["method"])
    return dict(N=s.N, d=s.d, p=s.p, norm=s.norm, exact_count=s.exact_count, flag=s.flag,
                quadrature=s.quadrature)


@command("count", dict(N=3, k=3, d=1), ("N", "k", "d", "count"),
         help="number of solutions of the paired linear and quadratic system")
def _count(p, ctx):
    return dict(N=p["N"], k=p["k"], d=p["d"], count=core.vinogradov_count(p["N"], p["k"], p["d"]))


# ---------------------------------------------------------------- arcs and bounds

@command("vaughan", dict(N=1024, samples=10000), ("N", "samples", "max_constant", "x", "t", "q"),
         help="largest realised constant of the major-arc remainder over Sobol samples")
def _vaughan(p, ctx):
    pts = _sobol(2, p["samples"], ctx.seed)
    worst = None
    for x, t in pts:
        v = arcs.vaughan_decompose(float(x), float(t), p["N"])
        if worst is None or v.realized_constant > worst.realized_constant:
            worst = v
    return dict(N=p["N"], samples=p["samples"], max_constant=worst.realized_constant,
                x=worst.x, t=worst.t, q=worst.q)


@command("bounds", dict(N=256, eps=5e-4, samples=1000, c=2),
         ("N", "eps", "samples", "max_ratio_upper", "max_ratio_schmidt"),
         help="sampled ratios against the pointwise upper bound and the min-sum bound")
def _bounds(p, ctx):
    pts = _sobol(2, p["samples"], ctx.seed)
    N = p["N"]
    r_up = max(abs(core.weyl_1d(float(x), float(t), N)) /
               arcs.weyl_upper_bound_L21(float(x), float(t), N, p["eps"]) for x, t in pts)
    r_s = 0.0
    for a, b in pts:
        s = arcs.schmidt_min_sum(float(a), float(b), N, p["c"])
        if s.bound_finite:
            r_s = max(r_s, s.ratio)
    return dict(N=N, eps=p["eps"], samples=p["samples"], max_ratio_upper=r_up, max_ratio_schmidt=r_s)


@command("majorarc", dict(N=256, d=1, c1=0.125),
         ("N", "d", "c1", "arcs", "measure", "e3_measure", "min_ratio"),
         plot=PlotRule("N", "min_ratio", "N", "min arc value / N^s", ("d", "c1"), loglog=True,
                       reference=lambda g: (0.0, "flat")),
         help="major-arc family: measure and minimal normalised value")
def _majorarc(p, ctx):
    F = constructions.major_arc_family(p["N"], p["d"], p["c1"])
    return dict(N=F.N, d=F.d, c1=F.c1, arcs=len(F.arcs), measure=F.measure,
                e3_measure=F.e3_measure, min_ratio=F.min_ratio)


@command("certify", dict(N=1024, alpha=0.8, top=200, M=0),
         ("N", "alpha", "points", "certified", "max_c_t", "max_c_q", "max_c_x", "max_product"),
         help="large-value certificates for the top points of a maximal field")
def _certify(p, ctx):
    N, alpha = p["N"], p["alpha"]
    f = sweep.maximal_field(N, 1, p["M"] or None)
    order = np.argsort(f.value, kind="stable")[::-1]
    chosen = [k for k in order[: p["top"]] if f.value[k] >= N ** alpha * (1 + 1e-5)]
    certs, fails = [], 0
    for k in chosen:
        pt = core.TorusPoint.wrap(f.point(k), float(f.t_star[k]))
        try:
            certs.append(diophantine.certify_large_value(pt, N, alpha))
        except Exception:
            fails += 1
    mx = lambda attr: max((getattr(c, attr) for c in certs), default=float("nan"))
    return dict(N=N, alpha=alpha, points=len(chosen), certified=len(certs),
                max_c_t=mx("c_t"), max_c_q=mx("c_q"), max_c_x=mx("c_x"), max_product=mx("product"),
                flag="" if fails == 0 else f"{fails}_uncertified")


# ---------------------------------------------------------------- constructions

@command("counterexample", dict(N=64, d=2, m=1, kappa=0.2, p=4.0),
         ("N", "d", "m", "kappa", "p", "D", "ratio", "predicted_exponent", "predicted_scale",
          "boxes", "region_measure"),
         help="split-dimension data: L^p over the coherent region divided by ||f||_2")
def _counterexample(p, ctx):
    spec = constructions.CounterexampleSpec(p["d"], p["m"], p["kappa"], p["p"])
    R = constructions.counterexample_ratio(spec, p["N"])
    return dict(N=R.N, d=spec.d, m=spec.m, kappa=spec.kappa, p=spec.p, D=R.D, ratio=R.ratio,
                predicted_exponent=R.predicted_exponent, predicted_scale=R.predicted_scale,
                boxes=R.boxes, region_measure=R.region_measure)


@command("completion", dict(N=64, M=128, samples=1000),
         ("N", "M", "samples", "max_ratio"),
         help="domination of |w_N| by the completion sum S_M")
def _completion(p, ctx):
    pts = _sobol(2, p["samples"], ctx.seed)
    worst = max(constructions.completion_sum(float(x), float(t), p["N"], p["M"]).ratio
                for x, t in pts)
    return dict(N=p["N"], M=p["M"], samples=p["samples"], max_ratio=worst)


@command("gtau", dict(q=5, d=1, alpha=0.8), ("d", "alpha", "tau", "q", "N_q", "a", "value", "ratio"),
         ladder=("q",), help="arc-centre probes on the odd-q ladder")
def _gtau(p, ctx):
    (s,) = constructions.gtau_points(p["alpha"], p["d"], [p["q"]])
    return dict(d=p["d"], alpha=p["alpha"], tau=s.tau, q=s.q, N_q=s.N_q, a=s.a,
                value=s.value, ratio=s.ratio)


@command("boxcount", dict(N=128, d=1, alpha=0.85, scales=0, M=0, cell_centered=True),
         ("N", "d", "alpha", "scales", "slope", "target", "counts"),
         ladder=("N", "alpha"),
         help="dyadic box counts of a level set")
def _boxcount(p, ctx):
    N, d = p["N"], p["d"]
    M = p["M"] or None
    f = sweep.maximal_field(N, d, M, cell_centered=p["cell_centered"])
    bc = constructions.box_count(f.value >= N ** p["alpha"], p["alpha"], p["scales"] or None)
    return dict(N=N, d=d, alpha=p["alpha"], scales=len(bc.counts), slope=bc.slope,
                target=bc.target, counts=bc.counts)


@command("generic", dict(N=16, betas=[math.sqrt(2)], Kmax=100, p=2.0, M0=0, rel_tol=0.01),
         ("N", "d", "betas", "Kmax", "margin", "p", "M_final", "value", "upper", "converged", "flag"),
         plot=PlotRule("N", "value", "N", "||sup_t |w_N| ||_p (generic torus)", ("d", "p"),
                       reference=lambda g: ((g["d"] + 1) / 2, "reference slope")),
         help="maximal L^p norm on a generic rectangular torus")
def _generic(p, ctx):
    shape = core.TorusShape(tuple(float(b) for b in p["betas"]))
    d = shape.d
    margin = diophantine.genericity_margin(shape, p["Kmax"]) if d <= 3 else float("nan")
    if not margin > 0:
        raise UsageError(f"params.betas: genericity margin {margin} is not positive")
    res = sweep.lp_norm_of_maximal(p["N"], d, p["p"], p["M0"] or None, rel_tol=p["rel_tol"],
                                   shape=shape)
    return dict(N=p["N"], d=d, betas=list(shape.betas), Kmax=p["Kmax"], margin=margin, p=res.p,
                M_final=res.ladder[-1][0], value=res.value, upper=res.upper,
                converged=res.converged, flag="" if res.converged else "not_converged")


# fit and emit operate on the store; the runner handles them
REGISTRY["fit"] = Command("fit", dict(source="lpnorm", y="", where={}),
                          ("source", "y", "slope", "intercept", "n_min", "n_max", "points",
                           "residuals"), None, (), None,
                          "least-squares exponent over stored records")
REGISTRY["emit"] = Command("emit", dict(source=""), (), None, (), None,
                           "rewrite CSV, plot spec and figures from the store")

DEFAULT_Y = {"lpnorm": "value", "levelset": "measure", "rects": "count", "strichartz": "norm",
             "majorarc": "min_ratio", "generic": "value", "counterexample": "ratio"}
