"""Command-line front end: pricing, surfaces, densities, Esscher
diagnostics, damping calibration, path simulation, and empirical moment
comparison for ingested return series.

Numeric output uses fixed decimal formatting (round-half-even, default 4
decimal places), so identical invocations produce byte-identical output.
Exit codes: 0 success, 2 validation failure, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from . import reference
from .density import cdf_mixture, pdf_fourier, pdf_mixture
from .errors import NumericalError, ValidationError, VGError
from .esscher import EsscherMeasure, martingale_check, solvability, solve_h_star
from .model import (
    VGParams,
    annualized_daily_params,
    cumulants,
    mgf_strip,
    steepness,
)
from .pricing import (
    MarketContext,
    black_scholes,
    calibrate_q,
    er_objective,
    price_extended,
    price_generalized,
    price_surface,
)
from .simulate import (
    OUConfig,
    ks_critical_value,
    ks_statistic,
    simulate_vg_path,
)

__all__ = ["main"]

_PARAM_KEYS = ("mu", "delta", "sigma", "alpha", "theta")
_PRESETS = {
    "table1": {
        "mu": reference.TABLE1_PARAMS.mu,
        "delta": reference.TABLE1_PARAMS.delta,
        "sigma": reference.TABLE1_PARAMS.sigma,
        "alpha": reference.TABLE1_PARAMS.alpha,
        "theta": reference.TABLE1_PARAMS.theta,
        "rate": reference.RATE,
        "spot": reference.SPOT,
        "vol_bs": reference.BS_VOL,
    },
}
_PRESETS["spy"] = _PRESETS["table1"]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vgpricer",
        description="Five-parameter Variance-Gamma European option pricer",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser):
        p.add_argument("--config", help="flat key=value file; flags take precedence")
        p.add_argument("--preset", choices=sorted(_PRESETS), help="named parameter preset")
        for key in _PARAM_KEYS:
            p.add_argument(f"--{key}", type=float)
        p.add_argument("--rate", type=float)
        p.add_argument("--spot", type=float)
        p.add_argument("--vol-bs", dest="vol_bs", type=float)
        p.add_argument("--time-scale", dest="time_scale", type=float, default=1.0,
                       help="model-time units per year (e.g. 365 for a daily-fitted model)")
        p.add_argument("--unit-scale", dest="unit_scale", type=float, default=1.0,
                       help="return units per natural-log unit (100 for percent returns)")
        p.add_argument("--h-star-override", dest="h_star_override", type=float)
        p.add_argument("--seed", type=int, default=12345)
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--decimals", type=int, default=4)
        p.add_argument("--out", help="output path (default: stdout)")
        return p

    p_price = add_common(sub.add_parser("price", help="price one European call"))
    p_price.add_argument("--strike", type=float, required=True)
    p_price.add_argument("--tau", type=float, required=True)
    p_price.add_argument("--engine", choices=("extended", "generalized", "both"), default="both")
    p_price.add_argument("--q", type=float, help="damping override for the generalized engine")

    p_table = add_common(sub.add_parser("table", help="price a strike/maturity lattice"))
    p_table.add_argument("--paper-grid", action="store_true",
                         help="use the built-in 31-strike x 6-maturity benchmark lattice")
    p_table.add_argument("--strikes", help="comma-separated strike list")
    p_table.add_argument("--taus", help="comma-separated maturity list (years)")
    p_table.add_argument("--replication", action="store_true",
                         help="append benchmark columns and deviations")

    p_dens = add_common(sub.add_parser("density", help="tabulate pdf and cdf"))
    p_dens.add_argument("--t", default="0.25,0.5,0.75,1.0", help="comma-separated horizons")
    p_dens.add_argument("--range", dest="half_range", type=float, default=12.0)
    p_dens.add_argument("--points", type=int, default=1601)

    p_sim = add_common(sub.add_parser("simulate", help="simulate OU variance and VG paths"))
    p_sim.add_argument("--horizon", type=float, default=100.0)
    p_sim.add_argument("--dt", type=float, default=0.01)
    p_sim.add_argument("--lam", type=float, default=1.0)
    p_sim.add_argument("--sigma2-0", dest="sigma2_0", type=float, default=0.0)

    p_mom = add_common(sub.add_parser("moments", help="empirical vs model moments"))
    p_mom.add_argument("--returns", required=True, help="CSV with date,close columns")

    p_cal = add_common(sub.add_parser("calibrate-q", help="optimal damping per moneyness"))
    p_cal.add_argument("--k-list", dest="k_list", default="1.0")

    add_common(sub.add_parser("esscher", help="martingale-measure diagnostics"))
    return parser


def _load_config(path: str) -> dict:
    values: dict[str, float] = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise ValidationError(f"bad config line: {line!r}")
                key, _, raw = line.partition("=")
                values[key.strip().replace("-", "_")] = float(raw.strip())
    except OSError as exc:
        raise ValidationError(f"cannot read config file {path}: {exc}") from exc
    return values


def _resolve(args: argparse.Namespace):
    """Merge preset, config file and flags into model/market settings."""
    merged: dict[str, float] = {}
    if args.preset:
        merged.update(_PRESETS[args.preset])
    if args.config:
        merged.update(_load_config(args.config))
    for key in (*_PARAM_KEYS, "rate", "spot", "vol_bs"):
        flag = getattr(args, key, None)
        if flag is not None:
            merged[key] = flag
    missing = [k for k in _PARAM_KEYS if k not in merged]
    if missing:
        raise ValidationError(f"missing model parameters: {', '.join(missing)}")
    params = VGParams(*(merged[k] for k in _PARAM_KEYS))
    if args.time_scale != 1.0 or args.unit_scale != 1.0:
        params = annualized_daily_params(params, args.time_scale, args.unit_scale)
    return params, merged


def _measure(params: VGParams, rate: float, args: argparse.Namespace) -> EsscherMeasure:
    if args.h_star_override is not None:
        try:
            return EsscherMeasure.from_h(params, rate, args.h_star_override)
        except ValidationError as exc:
            print(
                f"warning: --h-star-override {args.h_star_override} rejected "
                f"({exc}); falling back to the solved tilt",
                file=sys.stderr,
            )
    return solve_h_star(params, rate)


class _Writer:
    def __init__(self, args: argparse.Namespace):
        self.decimals = args.decimals
        self.path = args.out

    def fmt(self, value) -> str:
        if isinstance(value, float):
            return f"{value:.{self.decimals}f}"
        return str(value)

    def emit(self, text: str):
        if self.path:
            with open(self.path, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)

    def rows(self, header: list[str], rows: list[list]) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([self.fmt(v) for v in row])
        return buf.getvalue()

    def json(self, payload) -> str:
        def round_floats(obj):
            if isinstance(obj, float):
                return float(self.fmt(obj))
            if isinstance(obj, dict):
                return {k: round_floats(v) for k, v in obj.items()}
            if isinstance(obj, (list, tuple)):
                return [round_floats(v) for v in obj]
            return obj

        return json.dumps(round_floats(payload), indent=2, sort_keys=True) + "\n"


def _cmd_price(args) -> int:
    params, merged = _resolve(args)
    if "rate" not in merged or "spot" not in merged:
        raise ValidationError("price requires --rate and --spot")
    mkt = MarketContext(merged["spot"], args.strike, merged["rate"], args.tau)
    measure = _measure(params, merged["rate"], args)
    out: dict = {"strike": args.strike, "tau": args.tau, "h_star": measure.h_star}
    if args.engine in ("extended", "both"):
        out["extended"] = price_extended(params, mkt, measure=measure).price
    if args.engine in ("generalized", "both"):
        grid = None
        if args.q is not None:
            from .pricing import _auto_grid

            grid = _auto_grid(measure, mkt.tau, np.array([mkt.log_moneyness]), args.q)
        quote = price_generalized(params, mkt, grid=grid, measure=measure)
        out["generalized"] = quote.price
        out["imag_residue"] = quote.diagnostics["imag_residue"]
    if args.engine == "both":
        out["engine_delta"] = out["extended"] - out["generalized"]
    if "vol_bs" in merged:
        out["black_scholes"] = black_scholes(mkt, merged["vol_bs"]).price
    writer = _Writer(args)
    if args.format == "json":
        writer.emit(writer.json(out))
    else:
        keys = list(out)
        writer.emit(writer.rows(keys, [[out[k] for k in keys]]))
    return 0


def _parse_list(raw: str) -> list[float]:
    try:
        return [float(tok) for tok in raw.split(",") if tok.strip()]
    except ValueError as exc:
        raise ValidationError(f"bad numeric list {raw!r}") from exc


def _cmd_table(args) -> int:
    params, merged = _resolve(args)
    for need in ("rate", "spot", "vol_bs"):
        if need not in merged:
            raise ValidationError(f"table requires --{need.replace('_', '-')}")
    spot, rate, vol = merged["spot"], merged["rate"], merged["vol_bs"]
    if args.paper_grid:
        strikes = reference.STRIKES.tolist()
        taus = list(reference.MATURITIES)
    else:
        if not args.strikes or not args.taus:
            raise ValidationError("table needs --paper-grid or both --strikes and --taus")
        strikes = _parse_list(args.strikes)
        taus = _parse_list(args.taus)

    measure = _measure(params, rate, args)
    ext = price_surface(params, rate, spot, strikes, taus, "extended", measure=measure)
    gen = price_surface(params, rate, spot, strikes, taus, "generalized", measure=measure)
    header = ["strike", "moneyness", "tau", "bsm", "vg_extended", "vg_generalized"]
    replicating = args.replication and args.paper_grid
    if replicating:
        header += ["ref_vg_nc", "ref_vg_frft", "dev_nc", "dev_frft"]
        ref_nc = reference.vg_nc_reference()
        ref_fr = reference.vg_frft_reference()
    rows = []
    for i, strike in enumerate(strikes):
        for j, tau in enumerate(taus):
            bs = black_scholes(MarketContext(spot, strike, rate, tau), vol).price
            row = [
                strike,
                spot / strike,
                tau,
                bs,
                ext[i * len(taus) + j].price,
                gen[i * len(taus) + j].price,
            ]
            if replicating:
                row += [
                    ref_nc[i, j],
                    ref_fr[i, j],
                    row[4] - ref_nc[i, j],
                    row[5] - ref_fr[i, j],
                ]
            rows.append(row)
    writer = _Writer(args)
    if args.format == "json":
        writer.emit(writer.json([dict(zip(header, row)) for row in rows]))
    else:
        writer.emit(writer.rows(header, rows))
    return 0


def _cmd_density(args) -> int:
    params, _ = _resolve(args)
    taus = _parse_list(args.t)
    writer = _Writer(args)
    header = ["tau", "y", "pdf_mixture", "pdf_fourier", "cdf"]
    rows = []
    for tau in taus:
        centre = tau * cumulants(params).mean
        ys = centre + np.linspace(-args.half_range, args.half_range, args.points)
        pm = pdf_mixture(params, ys, tau)
        pf = pdf_fourier(params, ys, tau)[0]
        cdf = cdf_mixture(params, ys, tau)
        for k in range(ys.size):
            rows.append([tau, ys[k], pm[k], pf[k], cdf[k]])
    if args.format == "json":
        writer.emit(writer.json([dict(zip(header, row)) for row in rows]))
    else:
        writer.emit(writer.rows(header, rows))
    return 0


def _cmd_simulate(args) -> int:
    params, _ = _resolve(args)
    cfg = OUConfig(
        params.alpha, params.theta, args.lam, args.sigma2_0, args.horizon, args.dt
    )
    bundle = simulate_vg_path(params, cfg, args.seed)
    resid = float(
        np.max(
            np.abs(
                cfg.lam * bundle.sigma2_star - bundle.z + bundle.sigma2 - bundle.sigma2_0
            )
        )
    )
    burn = bundle.times > min(20.0, 0.2 * args.horizon)
    sample = bundle.sigma2[burn]
    increments = np.diff(bundle.y)
    zs = np.sort(increments)
    grid = np.linspace(zs[0] - 1.0, zs[-1] + 1.0, 2001)
    model_cdf = cdf_mixture(params, grid, args.dt)
    ks = ks_statistic(zs, np.interp(zs, grid, model_cdf))
    stats = {
        "stationary_mean": float(sample.mean()),
        "stationary_mean_target": params.alpha * params.theta,
        "stationary_var": float(sample.var()),
        "stationary_var_target": params.alpha * params.theta**2,
        "cointegration_max_residual": resid,
        "ks_increments_vs_model": ks,
        "ks_critical_1pct": ks_critical_value(0.01, zs.size),
        "n_jumps": int(bundle.jump_times.size),
        "seed": args.seed,
    }
    writer = _Writer(args)
    header = ["t", "z", "sigma2", "sigma2_star", "y"]
    rows = [
        [bundle.times[i], bundle.z[i], bundle.sigma2[i], bundle.sigma2_star[i], bundle.y[i]]
        for i in range(bundle.times.size)
    ]
    csv_text = writer.rows(header, rows)
    stats_text = writer.json(stats)
    if args.out:
        writer.emit(csv_text)
        sys.stdout.write(stats_text)
    else:
        sys.stdout.write(csv_text)
        sys.stderr.write(stats_text)
    return 0


def _cmd_moments(args) -> int:
    params, _ = _resolve(args)
    try:
        with open(args.returns, "r", encoding="utf-8", newline="") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None or not {"date", "close"} <= set(reader.fieldnames):
                raise ValidationError("returns CSV needs date and close columns")
            dates, closes = [], []
            for record in reader:
                dates.append(record["date"])
                closes.append(float(record["close"]))
    except OSError as exc:
        raise ValidationError(f"cannot read {args.returns}: {exc}") from exc
    except (ValueError, KeyError) as exc:
        raise ValidationError(f"malformed returns CSV: {exc}") from exc
    if len(closes) < 3:
        raise ValidationError("need at least three close prices")
    if any(b <= a for a, b in zip(dates, dates[1:])):
        raise ValidationError("dates must be strictly increasing")
    closes_arr = np.asarray(closes)
    if np.any(closes_arr <= 0.0):
        raise ValidationError("close prices must be positive")
    rets = 100.0 * np.diff(np.log(closes_arr))
    var = float(rets.var())
    if var == 0.0:
        print("warning: constant price series; variance is zero", file=sys.stderr)
        skew = kurt = float("nan")
    else:
        centred = rets - rets.mean()
        skew = float(np.mean(centred**3) / var**1.5)
        kurt = float(np.mean(centred**4) / var**2)
    model = cumulants(params)
    payload = {
        "n_returns": int(rets.size),
        "empirical": {
            "mean": float(rets.mean()),
            "variance": var,
            "skewness": skew,
            "kurtosis": kurt,
        },
        "model": {
            "mean": model.mean,
            "variance": model.variance,
            "skewness": model.skewness,
            "kurtosis": model.kurtosis,
        },
    }
    writer = _Writer(args)
    if args.format == "json":
        writer.emit(writer.json(payload))
    else:
        header = ["statistic", "empirical", "model"]
        rows = [
            ["mean", payload["empirical"]["mean"], model.mean],
            ["variance", payload["empirical"]["variance"], model.variance],
            ["skewness", payload["empirical"]["skewness"], model.skewness],
            ["kurtosis", payload["empirical"]["kurtosis"], model.kurtosis],
        ]
        writer.emit(writer.rows(header, rows))
    return 0


def _cmd_calibrate_q(args) -> int:
    _resolve(args)  # validates parameters even though ER is model-free
    ks = _parse_list(args.k_list)
    writer = _Writer(args)
    rows = []
    for k in ks:
        if k <= 0.0:
            raise ValidationError(f"moneyness must be positive, got {k!r}")
        q_opt = calibrate_q(k)
        rows.append([k, q_opt, er_objective(k, q_opt)])
    header = ["k", "q_opt", "er_min"]
    if args.format == "json":
        writer.emit(writer.json([dict(zip(header, row)) for row in rows]))
    else:
        writer.emit(writer.rows(header, rows))
    return 0


def _cmd_esscher(args) -> int:
    params, merged = _resolve(args)
    if "rate" not in merged:
        raise ValidationError("esscher requires --rate")
    strip = mgf_strip(params)
    steep = steepness(params)
    payload = {
        "h1": strip.h1,
        "h2": strip.h2,
        "x1": steep.x1,
        "x2": steep.x2,
        "solvable": solvability(params),
    }
    if solvability(params):
        measure = _measure(params, merged["rate"], args)
        payload.update(
            {
                "h_star": measure.h_star,
                "tilted_delta": measure.tilted.delta,
                "tilted_theta": measure.tilted.theta,
                "tilted_plus_delta": measure.tilted_plus.delta,
                "tilted_plus_theta": measure.tilted_plus.theta,
                "martingale_residual_analytic": martingale_check(measure, 1.0),
                "martingale_residual_quadrature": martingale_check(
                    measure, 1.0, method="quadrature"
                ),
            }
        )
    writer = _Writer(args)
    writer.emit(writer.json(payload))
    return 0


_COMMANDS = {
    "price": _cmd_price,
    "table": _cmd_table,
    "density": _cmd_density,
    "simulate": _cmd_simulate,
    "moments": _cmd_moments,
    "calibrate-q": _cmd_calibrate_q,
    "esscher": _cmd_esscher,
}


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except VGError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
