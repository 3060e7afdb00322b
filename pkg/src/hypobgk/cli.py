"""Command-line front end for the certificate toolkit.

Subcommands expose the main workflows: ``index`` (hypocoercivity
index of a modal generator), ``certificate`` (closed-form decay
certificate with matrix verification), ``spectrum`` (numerical
spectral gaps per mode), ``minors`` (closed-form minor chain at one
parameter point), ``simulate`` (modal trajectory with entropy, norm,
L1 and envelope columns), ``sweep-L`` (certified rate as a function of
torus length) and ``envelope`` (the L1 decay envelope curve).

Artifacts are CSV or JSON; every artifact echoes the effective
configuration, so a stored output identifies the run that produced
it.  Identical configurations produce byte-identical artifacts.

Exit status: 0 on success, 1 on usage errors (bad flags or
out-of-range parameters), 2 when a verification step fails (an
invalid certificate or a rejected eigensolve).
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import __version__
from .certificate import (
    alpha3_1d,
    alpha_plus_2d,
    alpha_plus_3d,
    certify,
    minors_1d,
    minors_2d,
    minors_3d,
)
from .gap import EigenvalueFailure, spectral_gap
from .hermite import MIN_CERTIFICATE_SIZE
from .index import hypocoercivity_index
from .operators import mode_moduli, operator_pair
from .sim import concentrated_initial_data, run_trajectory, t_init

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFY = 2

TWO_PI = 2.0 * math.pi

#: fixed key order for the configuration echo
_CONFIG_KEYS = (
    "subcommand",
    "dim",
    "L",
    "basis",
    "trunc",
    "kappa",
    "kmax",
    "alpha",
    "epsilon",
    "tmax",
    "dt",
    "gamma",
    "tol_rank",
    "format",
    "seed",
    "from",
    "to",
    "points",
)


class _Parser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors exit with status 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _default_basis(dim: int) -> str:
    return "tensor" if dim == 1 else "energy"


def _default_trunc(dim: int) -> int:
    return 4 * MIN_CERTIFICATE_SIZE[dim]


def _num(x) -> str:
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, float):
        return "%.15g" % x
    return str(x)


def _cfg_str(v) -> str:
    if v is None:
        return "none"
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_cfg_str(x) for x in v) + "]"
    return str(v)


def _ordered_config(entries: dict) -> dict:
    out = {k: entries[k] for k in _CONFIG_KEYS if k in entries}
    for k in entries:
        if k not in out:
            out[k] = entries[k]
    return out


def _csv_text(config: dict, header, rows, extra: dict | None = None) -> str:
    lines = [f"# {k} = {_cfg_str(v)}" for k, v in config.items()]
    if extra:
        for k, v in extra.items():
            lines.append(f"# {k} = {_cfg_str(v)}")
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(_num(x) for x in row))
    return "\n".join(lines) + "\n"


def _json_text(config: dict, payload: dict) -> str:
    doc = {"config": config}
    doc.update(payload)
    return json.dumps(doc, indent=2) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _resolve_kappa_list(args) -> list:
    if args.kappa:
        ks = [float(k) for k in args.kappa]
        if any(k <= 0 for k in ks):
            raise ValueError("mode moduli must be positive")
        return ks
    kmax = args.kmax if args.kmax else 5
    return [m for m, _ in mode_moduli(args.dim, kmax)]


def _alpha_plus(dim: int, L: float) -> float:
    ell = TWO_PI / L
    if dim == 1:
        return alpha3_1d(L)
    if dim == 2:
        return alpha_plus_2d(ell)
    return alpha_plus_3d(ell)


# ---------------------------------------------------------------------------
# subcommand handlers: take parsed args, return (exit_code, artifact text)


def _run_index(args):
    basis = args.basis or _default_basis(args.dim)
    trunc = args.trunc or _default_trunc(args.dim)
    kappa = float(args.kappa[0]) if args.kappa else 1.0
    if kappa <= 0:
        raise ValueError("mode modulus must be positive")
    pair = operator_pair(args.dim, basis, trunc, L=args.L)
    C1 = kappa * pair.ell * np.asarray(pair.L1, dtype=float)
    C2 = np.asarray(pair.L2, dtype=float)
    rep = hypocoercivity_index(C1, C2, tol=args.tol_rank)
    config = _ordered_config(
        {
            "subcommand": "index",
            "dim": args.dim,
            "L": args.L,
            "basis": basis,
            "trunc": trunc,
            "kappa": kappa,
            "tol_rank": args.tol_rank,
            "format": args.format or "json",
            "seed": args.seed,
        }
    )
    if (args.format or "json") == "json":
        text = _json_text(
            config,
            {
                "hypocoercive": rep.hypocoercive,
                "tau": rep.tau,
                "rank_profile": list(rep.rank_profile),
                "dim_ker_C2": rep.dim_ker_C2,
                "coercivity_constant": rep.coercivity_constant,
            },
        )
    else:
        header = ["tau", "hypocoercive", "dim_ker_C2", "coercivity_constant"]
        tau = rep.tau if rep.tau is not None else -1
        cc = rep.coercivity_constant if rep.coercivity_constant is not None else float("nan")
        text = _csv_text(
            config,
            header,
            [(tau, rep.hypocoercive, rep.dim_ker_C2, cc)],
            extra={"rank_profile": list(rep.rank_profile)},
        )
    return EXIT_OK, text


def _run_certificate(args):
    cert = certify(args.dim, args.L, alpha=args.alpha)
    config = _ordered_config(
        {
            "subcommand": "certificate",
            "dim": args.dim,
            "L": args.L,
            "alpha": args.alpha,
            "format": args.format or "json",
            "seed": args.seed,
        }
    )
    if (args.format or "json") == "json":
        text = _json_text(config, cert.to_json_dict())
    else:
        header = [
            "d",
            "L",
            "alpha_plus",
            "alpha_star",
            "mu",
            "lambda",
            "c_d",
            "C_d",
            "valid",
        ]
        row = (
            cert.d,
            cert.L,
            cert.alpha_plus,
            cert.alpha_star,
            cert.mu,
            cert.lam,
            cert.c_d,
            cert.C_d,
            cert.valid,
        )
        text = _csv_text(config, header, [row])
    code = EXIT_OK if cert.valid else EXIT_VERIFY
    return code, text


def _run_spectrum(args):
    trunc = args.trunc or _default_trunc(args.dim)
    ks = _resolve_kappa_list(args)
    rep = spectral_gap(args.dim, args.L, ks, trunc)
    config = _ordered_config(
        {
            "subcommand": "spectrum",
            "dim": args.dim,
            "L": args.L,
            "trunc": trunc,
            "kappa": ks,
            "kmax": args.kmax or None,
            "format": args.format or "csv",
            "seed": args.seed,
        }
    )
    extra = {"gap": rep.gap, "argmin_kappa": rep.argmin_kappa}
    if (args.format or "csv") == "json":
        text = _json_text(
            config,
            {
                "entries": [
                    {"kappa": k, "N": n, "gap": g} for k, n, g in rep.rows()
                ],
                "gap": rep.gap,
                "argmin_kappa": rep.argmin_kappa,
            },
        )
    else:
        text = _csv_text(config, ["kappa", "N", "gap"], rep.rows(), extra=extra)
    return EXIT_OK, text


def _run_minors(args):
    ell = TWO_PI / args.L
    kappa = float(args.kappa[0]) if args.kappa else 1.0
    alpha = args.alpha
    if alpha is None:
        alpha = 0.5 * _alpha_plus(args.dim, args.L)
    fn = {1: minors_1d, 2: minors_2d, 3: minors_3d}[args.dim]
    table = fn(kappa, alpha, ell)
    config = _ordered_config(
        {
            "subcommand": "minors",
            "dim": args.dim,
            "L": args.L,
            "kappa": kappa,
            "alpha": alpha,
            "format": args.format or "json",
            "seed": args.seed,
        }
    )
    if (args.format or "json") == "json":
        text = _json_text(
            config,
            {
                "convention": table.convention,
                "ell": table.ell,
                "values": list(table.values),
                "p_values": table.p_values,
                "positive": all(v > 0 for v in table.values),
            },
        )
    else:
        rows = [(j + 1, v) for j, v in enumerate(table.values)]
        extra = {"convention": table.convention, "ell": table.ell}
        extra.update(table.p_values)
        text = _csv_text(config, ["i", "delta"], rows, extra=extra)
    return EXIT_OK, text


def _simulation_grid(tmax: float, dt: float):
    if tmax <= 0 or dt <= 0:
        raise ValueError("tmax and dt must be positive")
    n = int(math.floor(tmax / dt + 1e-9)) + 1
    if n < 2:
        raise ValueError("tmax must cover at least one step")
    return n, (n - 1) * dt


def _run_simulate(args):
    if args.dim != 1:
        raise ValueError("simulation reconstruction requires --dim 1")
    trunc = args.trunc or _default_trunc(1)
    kmax = args.kmax or 128
    n, tmax = _simulation_grid(args.tmax, args.dt)
    cert = certify(1, args.L, n_verify=0, alpha=args.alpha)
    state = concentrated_initial_data(args.epsilon, kmax=kmax, N=trunc, L=args.L)
    data = run_trajectory(
        state,
        tmax,
        n,
        alpha=cert.alpha_star,
        gamma=args.gamma,
        C_d=cert.C_d,
        lam=cert.lam,
    )
    config = _ordered_config(
        {
            "subcommand": "simulate",
            "dim": 1,
            "L": args.L,
            "trunc": trunc,
            "kmax": kmax,
            "alpha": cert.alpha_star,
            "epsilon": args.epsilon,
            "tmax": tmax,
            "dt": args.dt,
            "gamma": args.gamma,
            "format": args.format or "csv",
            "seed": args.seed,
        }
    )
    derived = {
        "mu": cert.mu,
        "lambda": cert.lam,
        "C_d": cert.C_d,
        "E0": float(data["entropy"][0]),
        "t_init": t_init(cert.C_d, float(data["entropy"][0]), cert.lam),
        "truncation_tail": state.info["truncation_tail"],
    }
    header = ["t", "entropy", "h_norm", "l1", "envelope"]
    cols = [data["t"], data["entropy"], data["h_norm"], data["l1"], data["envelope"]]
    if (args.format or "csv") == "json":
        payload = {"derived": derived}
        payload.update({h: [float(x) for x in c] for h, c in zip(header, cols)})
        text = _json_text(config, payload)
    else:
        rows = list(zip(*[[float(x) for x in c] for c in cols]))
        text = _csv_text(config, header, rows, extra=derived)
    return EXIT_OK, text


def _run_sweep(args):
    if args.sweep_from <= 0 or args.sweep_to <= args.sweep_from:
        raise ValueError("sweep range must satisfy 0 < from < to")
    if args.points < 2:
        raise ValueError("need at least two sweep points")
    Ls = np.geomspace(args.sweep_from, args.sweep_to, args.points)
    rows = []
    for L in Ls:
        cert = certify(args.dim, float(L), n_verify=0)
        rows.append(
            (float(L), cert.alpha_plus, cert.alpha_star, cert.mu, 2.0 * cert.mu)
        )
    config = _ordered_config(
        {
            "subcommand": "sweep-L",
            "dim": args.dim,
            "format": args.format or "csv",
            "seed": args.seed,
            "from": args.sweep_from,
            "to": args.sweep_to,
            "points": args.points,
        }
    )
    header = ["L", "alpha_plus", "alpha_star", "mu", "two_mu"]
    if (args.format or "csv") == "json":
        text = _json_text(
            config,
            {
                "rows": [
                    dict(zip(header, row)) for row in rows
                ]
            },
        )
    else:
        text = _csv_text(config, header, rows)
    return EXIT_OK, text


def _run_envelope(args):
    if args.dim != 1:
        raise ValueError("the envelope workflow requires --dim 1")
    n, tmax = _simulation_grid(args.tmax, args.dt)
    cert = certify(1, args.L, n_verify=0, alpha=args.alpha)
    E0 = 3.0 / (2.0 * args.epsilon) - 1.0
    ts = np.linspace(0.0, tmax, n)
    env = np.minimum(2.0, np.sqrt(cert.C_d * E0) * np.exp(-0.5 * cert.lam * ts))
    config = _ordered_config(
        {
            "subcommand": "envelope",
            "dim": 1,
            "L": args.L,
            "alpha": cert.alpha_star,
            "epsilon": args.epsilon,
            "tmax": tmax,
            "dt": args.dt,
            "format": args.format or "csv",
            "seed": args.seed,
        }
    )
    derived = {
        "mu": cert.mu,
        "lambda": cert.lam,
        "C_d": cert.C_d,
        "E0": E0,
        "t_init": t_init(cert.C_d, E0, cert.lam),
    }
    if (args.format or "csv") == "json":
        payload = {"derived": derived}
        payload.update(
            {"t": [float(x) for x in ts], "envelope": [float(x) for x in env]}
        )
        text = _json_text(config, payload)
    else:
        rows = list(zip((float(x) for x in ts), (float(x) for x in env)))
        text = _csv_text(config, ["t", "envelope"], rows, extra=derived)
    return EXIT_OK, text


_HANDLERS = {
    "index": _run_index,
    "certificate": _run_certificate,
    "spectrum": _run_spectrum,
    "minors": _run_minors,
    "simulate": _run_simulate,
    "sweep-L": _run_sweep,
    "envelope": _run_envelope,
}


def build_parser() -> _Parser:
    parser = _Parser(
        prog="hypobgk",
        description="Hypocoercivity certificates for linearized BGK modes.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p, sim=False, sweep=False):
        p.add_argument("--dim", type=int, choices=(1, 2, 3), default=1)
        p.add_argument("--L", type=float, default=TWO_PI)
        p.add_argument("--basis", choices=("tensor", "energy"), default=None)
        p.add_argument("--trunc", type=int, default=None)
        p.add_argument("--kappa", type=float, nargs="+", default=None)
        p.add_argument("--kmax", type=int, default=None)
        p.add_argument("--alpha", type=float, default=None)
        p.add_argument("--tol-rank", type=float, default=1e-10, dest="tol_rank")
        if sim:
            p.add_argument("--epsilon", type=float, default=0.02)
            p.add_argument("--tmax", type=float, default=40.0)
            p.add_argument("--dt", type=float, default=0.5)
            p.add_argument("--gamma", type=float, default=0.0)
        if sweep:
            p.add_argument("--from", type=float, default=0.1, dest="sweep_from")
            p.add_argument("--to", type=float, default=50.0, dest="sweep_to")
            p.add_argument("--points", type=int, default=100)
        p.add_argument("--out", default=None)
        p.add_argument("--format", choices=("csv", "json"), default=None)
        p.add_argument("--seed", type=int, default=0)

    common(sub.add_parser("index", help="hypocoercivity index of a modal generator"))
    common(sub.add_parser("certificate", help="closed-form decay certificate"))
    common(sub.add_parser("spectrum", help="numerical spectral gaps per mode"))
    common(sub.add_parser("minors", help="closed-form minor chain at one point"))
    common(sub.add_parser("simulate", help="modal trajectory with diagnostics"), sim=True)
    common(sub.add_parser("sweep-L", help="certified rate versus torus length"), sweep=True)
    common(sub.add_parser("envelope", help="L1 decay envelope curve"), sim=True)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.L <= 0:
        parser.error("torus length must be positive")
    handler = _HANDLERS[args.subcommand]
    try:
        code, text = handler(args)
    except ValueError as exc:
        parser.error(str(exc))
        return EXIT_USAGE
    except (EigenvalueFailure, ArithmeticError) as exc:
        sys.stderr.write(f"hypobgk: verification failure: {exc}\n")
        return EXIT_VERIFY
    _emit(text, args.out)
    if code == EXIT_VERIFY:
        sys.stderr.write(
            "hypobgk: certificate verification failed; see the emitted artifact\n"
        )
    return code


if __name__ == "__main__":
    sys.exit(main())
