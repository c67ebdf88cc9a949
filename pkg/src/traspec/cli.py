"""Command-line front end.

    traspec spectrum      lowest levels, matrix vs closed form
    traspec sweep         levels over a grid of one parameter
    traspec wavefunction  partial sums of the basis expansion on a radial grid
    traspec verify        run the self-check suites

Exit codes: 0 success, 1 verification failure, 2 configuration error,
3 non-confining parameters, 4 degenerate recursion requested.
"""

from __future__ import annotations

import argparse
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from traspec import __version__, assembly, eigensolve, recursion, systems, verify
from traspec.errors import DegenerateRecursionError, DomainError, NonConfiningError
from traspec.tables import Table

EXIT_OK, EXIT_VERIFY, EXIT_CONFIG, EXIT_NONCONFINING, EXIT_DEGENERATE = 0, 1, 2, 3, 4


class ConfigError(Exception):
    pass


# (dest, type, default); shared by flags and config files
_COMMON = {
    "system": (str, "efield"),
    "omega": (float, 1.0),
    "q": (float, 1.0),
    "zeta": (float, 0.0),
    "bfield": (float, 0.0),
    "c": (float, 1.0),
    "ell": (int, 0),
    "mu_az": (int, 0),
    "lambda": (str, "auto"),
    "basis_size": (int, 50),
    "levels": (int, 3),
    "out": (str, None),
    "format": (str, "csv"),
    "tolerance": (float, 1e-10),
}


# verb-specific keys, also accepted from a config file
_VERB = {
    "spectrum": {},
    "sweep": {"param": (str, None), "values": (str, None), "jobs": (int, 1)},
    "wavefunction": {
        "energy": (float, None),
        "state": (int, 0),
        "r_min": (float, 0.05),
        "r_max": (float, 5.0),
        "r_points": (int, 100),
        "terms": (int, 40),
        "depths": (str, None),
        "method": (str, "minimal"),
    },
}


@dataclass(frozen=True)
class RunConfig:
    system: str
    omega: float
    q: float
    zeta: float
    bfield: float
    c: float
    ell: int
    mu_az: int
    lam: float | None  # None means auto
    basis_size: int
    levels: int
    out: str | None
    format: str
    tolerance: float

    def physical(self):
        if self.system == "efield":
            return systems.EFieldSystem(self.omega, self.q, self.zeta, self.ell)
        return systems.BFieldSystem(self.omega, self.q, self.bfield, self.c, self.ell, self.mu_az)

    def resolve_lambda(self, sys) -> float:
        return systems.lambda_star(sys) if self.lam is None else self.lam


def read_config_file(path: str) -> dict[str, str]:
    """``key = value`` lines; ``#`` starts a comment; dashes in keys read as underscores."""
    out = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc.strerror}") from exc
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {raw.strip()!r}")
        out[key.strip().replace("-", "_")] = value.strip()
    return out


def _convert(key, raw, typ):
    if isinstance(raw, typ) and not isinstance(raw, bool):
        return raw
    try:
        if typ is int:
            val = float(raw)
            if not val.is_integer():
                raise ValueError
            return int(val)
        return typ(raw)
    except (TypeError, ValueError):
        raise ConfigError(f"{key}: cannot read {raw!r} as {typ.__name__}") from None


def _merge(table, args, file_values):
    out = {}
    for key, (typ, default) in table.items():
        flag = getattr(args, key, None)
        from_file = file_values.pop(key, None)
        raw = flag if flag is not None else from_file if from_file is not None else default
        out[key] = raw if raw is None else _convert(key, raw, typ)
    return out


def build_config(args: argparse.Namespace) -> tuple[RunConfig, dict]:
    """Merge flags over config-file values over defaults and validate everything.

    Returns the run configuration and the verb-specific options.
    """
    file_values = read_config_file(args.config) if getattr(args, "config", None) else {}
    values = _merge(_COMMON, args, file_values)
    opts = _merge(_VERB[args.verb], args, file_values)
    if file_values:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(file_values))}")

    if values["system"] not in ("efield", "bfield"):
        raise ConfigError(f"--system must be efield or bfield, got {values['system']!r}")
    if values["format"] not in ("csv", "json"):
        raise ConfigError(f"--format must be csv or json, got {values['format']!r}")
    lam_raw = values.pop("lambda")
    if lam_raw == "auto":
        lam = None
    else:
        lam = _convert("lambda", lam_raw, float)
        if not (lam > 0 and math.isfinite(lam)):
            raise ConfigError(f"--lambda must be a positive number or 'auto', got {lam_raw!r}")
    if values["basis_size"] < 1:
        raise ConfigError("--basis-size must be at least 1")
    if values["levels"] < 1:
        raise ConfigError("--levels must be at least 1")
    if values["levels"] > values["basis_size"]:
        raise ConfigError(f"--levels {values['levels']} exceeds --basis-size {values['basis_size']}")
    if not values["tolerance"] > 0:
        raise ConfigError("--tolerance must be positive")
    _check_verb_options(args.verb, opts)
    cfg = RunConfig(lam=lam, **values)
    cfg.physical()  # raises DomainError / NonConfiningError
    return cfg, opts


def _check_verb_options(verb, opts):
    if verb == "sweep":
        if opts["param"] not in _SWEEP_FIELDS:
            raise ConfigError(f"--param must be one of {', '.join(_SWEEP_FIELDS)}, got {opts['param']!r}")
        if opts["values"] is None:
            raise ConfigError("--values is required for a sweep")
        if opts["jobs"] < 1:
            raise ConfigError("--jobs must be at least 1")
        opts["values"] = _parse_values(opts["values"], _SWEEP_FIELDS[opts["param"]][1])
    elif verb == "wavefunction":
        if opts["method"] not in ("minimal", "forward"):
            raise ConfigError(f"--method must be minimal or forward, got {opts['method']!r}")
        if opts["terms"] < 1:
            raise ConfigError("--terms must be at least 1")
        opts["depths"] = _parse_values(opts["depths"], int) if opts["depths"] else [opts["terms"]]
        if min(opts["depths"]) < 1:
            raise ConfigError("--depths must be positive")
        if not 0 < opts["r_min"] < opts["r_max"]:
            raise ConfigError("need 0 < --r-min < --r-max")
        if opts["r_points"] < 1:
            raise ConfigError("--r-points must be positive")


def _metadata(cfg: RunConfig, sys, lam: float) -> dict:
    return {
        "system": sys.describe(),
        "lambda": lam,
        "lambda_star": systems.lambda_star(sys),
        "xi": systems.effective_xi(sys, lam),
        "basis_size": cfg.basis_size,
    }


def _emit(table: Table, cfg: RunConfig):
    text = table.render(cfg.format)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _levels(cfg: RunConfig, phys, lam: float):
    T = assembly.hamiltonian_matrix(phys, lam, cfg.basis_size)
    return eigensolve.eigenvalues(T, cfg.levels).energies


def cmd_spectrum(cfg: RunConfig) -> int:
    phys = cfg.physical()
    lam = cfg.resolve_lambda(phys)
    energies = _levels(cfg, phys, lam)
    table = Table(["n", "E_matrix", "E_analytic", "abs_delta", "E_field_free"], metadata=_metadata(cfg, phys, lam))
    worst = 0.0
    for n, E in enumerate(energies):
        exact = eigensolve.analytic_spectrum(phys, n)
        delta = abs(float(E) - exact)
        worst = max(worst, delta)
        table.add(n, float(E), exact, delta, eigensolve.field_free_spectrum(phys, n))
    diagonal = systems.effective_xi(phys, lam) == 0
    table.metadata["tolerance_applies"] = diagonal
    _emit(table, cfg)
    if diagonal and worst > cfg.tolerance:
        print(f"error: max |E_matrix - E_analytic| = {worst!r} exceeds tolerance {cfg.tolerance!r}", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


_SWEEP_FIELDS = {
    "B": ("bfield", float),
    "zeta": ("zeta", float),
    "omega": ("omega", float),
    "ell": ("ell", int),
    "mu_az": ("mu_az", int),
}


def _parse_values(text: str, typ) -> list:
    vals = [_convert("--values", v.strip(), typ) for v in text.split(",") if v.strip()]
    if not vals:
        raise ConfigError("--values is empty")
    return vals


def cmd_sweep(cfg: RunConfig, param: str, values: list, jobs: int = 1) -> int:
    """Long-format table, one row per (sweep value, level), in grid order.

    Magnetic sweeps add ``zeeman_shift = E(B, mu_az) - E(B, 0)`` from a second
    diagonalization at the same scale. The diamagnetic term makes ``E`` itself
    nonlinear in ``B``; this difference is the part linear in ``B``.
    """
    field, _ = _SWEEP_FIELDS[param]
    points = [replace(cfg, **{field: v}) for v in values]
    physical = [p.physical() for p in points]  # validate every point before computing any
    magnetic = cfg.system == "bfield"

    def solve(i):
        lam = points[i].resolve_lambda(physical[i])
        energies = _levels(points[i], physical[i], lam)
        shift = None
        if magnetic:
            ref = replace(physical[i], mu_az=0)
            shift = energies - _levels(points[i], ref, lam)
        return lam, energies, shift

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(solve, range(len(points))))
    else:
        results = [solve(i) for i in range(len(points))]
    columns = [param, "n", "lambda", "E_matrix", "E_analytic", "E_field_free"]
    table = Table(columns + (["zeeman_shift"] if magnetic else []))
    table.metadata.update({"sweep": param, "base_system": cfg.physical().describe(), "basis_size": cfg.basis_size})
    for v, phys, (lam, energies, shift) in zip(values, physical, results):
        for n, E in enumerate(energies):
            row = [v, n, lam, float(E), eigensolve.analytic_spectrum(phys, n), eigensolve.field_free_spectrum(phys, n)]
            if magnetic:
                row.append(float(shift[n]))
            table.add(*row)
    _emit(table, cfg)
    return EXIT_OK


def cmd_wavefunction(
    cfg: RunConfig,
    energy: float | None,
    r: np.ndarray,
    depths: list[int],
    *,
    state: int = 0,
    method: str = "minimal",
) -> int:
    phys = cfg.physical()
    lam = cfg.resolve_lambda(phys)
    E = eigensolve.analytic_spectrum(phys, state) if energy is None else energy
    x = systems.effective_xi(phys, lam)
    if x == 0 and max(depths) > 1:
        raise DegenerateRecursionError(
            "xi = 0 at this basis scale: the recursion is degenerate; use --terms 1 or a detuned --lambda"
        )
    meta = _metadata(cfg, phys, lam)
    meta["energy"] = E
    meta["method"] = method
    try:
        mp = recursion.match_meixner_pollaczek(phys, lam)
        meta.update({"mu_mp": mp.mu_mp, "theta": mp.theta, "cosh_theta": mp.cosh_theta})
        if mp.closed_form_cosh is not None:
            meta["cosh_theta_closed_form"] = mp.closed_form_cosh
    except (DegenerateRecursionError, DomainError) as exc:
        meta["meixner_pollaczek"] = f"no match: {exc}"
    sums = recursion.wavefunction_partial_sums(phys, lam, E, r, depths, method=method)
    table = Table(["r"] + [f"psi_{d}" for d in depths], metadata=meta)
    for j, rj in enumerate(r):
        table.add(float(rj), *[float(v) for v in sums[:, j]])
    _emit(table, cfg)
    return EXIT_OK


def cmd_verify(suite: str = "all", out=None) -> int:
    out = out or sys.stdout
    results = verify.run(suite)
    for res in results:
        print(res.line(), file=out)
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} checks passed", file=out)
    return EXIT_VERIFY if failed else EXIT_OK


def _add_common(p: argparse.ArgumentParser):
    g = p.add_argument_group("system and basis (defaults apply when neither flag nor --config sets a value)")
    g.add_argument("--config", help="key=value file; flags override its values")
    g.add_argument("--system", help="efield or bfield (default efield)")
    g.add_argument("--omega", help="oscillator parameter; potential omega^4 r^2 / 2 (default 1)")
    g.add_argument("--q", help="charge (default 1)")
    g.add_argument("--zeta", help="electric coupling, >= 0 (default 0)")
    g.add_argument("--bfield", help="magnetic field B, >= 0 (default 0)")
    g.add_argument("--c", help="speed of light (default 1)")
    g.add_argument("--ell", help="angular momentum (default 0)")
    g.add_argument("--mu-az", dest="mu_az", help="L_z eigenvalue, |mu_az| <= ell (default 0)")
    g.add_argument("--lambda", dest="lambda", help="basis scale, number or 'auto' for the diagonalizing scale")
    g.add_argument("--basis-size", dest="basis_size", help="truncation N (default 50)")
    g.add_argument("--levels", help="number of levels k (default 3)")
    g.add_argument("--out", help="output file (default stdout)")
    g.add_argument("--format", help="csv or json (default csv)")
    g.add_argument("--tolerance", help="agreement required at the diagonalizing scale (default 1e-10)")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="traspec", description="Laguerre-basis spectra of an oscillator in external fields.")
    parser.add_argument("--version", action="version", version=f"traspec {__version__}")
    sub = parser.add_subparsers(dest="verb", required=True)

    _add_common(sub.add_parser("spectrum", help="matrix and closed-form levels"))

    sw = sub.add_parser("sweep", help="levels over a grid of one parameter")
    _add_common(sw)
    sw.add_argument("--param", help=f"swept parameter: {', '.join(_SWEEP_FIELDS)}")
    sw.add_argument("--values", help="comma-separated grid; write --values=-1,0,1 when it starts negative")
    sw.add_argument("--jobs", help="parallel workers (default 1); row order does not depend on it")

    wf = sub.add_parser("wavefunction", help="partial sums of the basis expansion")
    _add_common(wf)
    wf.add_argument("--energy", help="energy E (default: closed-form level --state)")
    wf.add_argument("--state", help="level index used when --energy is absent (default 0)")
    wf.add_argument("--r-min", dest="r_min", help="first grid radius (default 0.05)")
    wf.add_argument("--r-max", dest="r_max", help="last grid radius (default 5)")
    wf.add_argument("--r-points", dest="r_points", help="grid points (default 100)")
    wf.add_argument("--terms", help="expansion terms N_terms (default 40)")
    wf.add_argument("--depths", help="comma-separated partial-sum depths; overrides --terms")
    wf.add_argument("--method", help="minimal (default) or forward")

    vf = sub.add_parser("verify", help="run self-check suites")
    vf.add_argument("suite", nargs="?", default="all", choices=["all", *verify.SUITES])
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    try:
        if args.verb == "verify":
            return cmd_verify(args.suite)
        cfg, opts = build_config(args)
        if args.verb == "spectrum":
            return cmd_spectrum(cfg)
        if args.verb == "sweep":
            return cmd_sweep(cfg, opts["param"], opts["values"], opts["jobs"])
        r = np.linspace(opts["r_min"], opts["r_max"], opts["r_points"])
        return cmd_wavefunction(cfg, opts["energy"], r, opts["depths"], state=opts["state"], method=opts["method"])
    except NonConfiningError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NONCONFINING
    except (ConfigError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DegenerateRecursionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE


if __name__ == "__main__":
    sys.exit(main())
