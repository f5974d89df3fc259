"""Command line interface: ``logsphere {minimize,lattice,fit,selftest}``.

Exit codes: 0 ok, 1 usage or data error, 2 optimizer failure, 3 self-test
failure.  JSON is written with sorted keys and shortest round-trip floats;
all files are replaced atomically.
"""

from __future__ import annotations

import argparse
import csv
import datetime
import json
import math
import os
import sys
import tempfile
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .asymptotics import expansion_report
from .errors import DegenerateBasis, DomainError, InsufficientData, NoProgress
from .identities import run_all
from .lattice import (
    BravaisLattice,
    LatticeShape,
    paper_constants,
    reduce_lattice,
    square_lattice,
    triangular_lattice,
    w_lattice,
)
from .optimizer import MinimizeOptions, minimize_log_energy

CSV_FIELDS = ("n", "seed", "energy", "min_separation", "converged")

EXIT_OK, EXIT_USAGE, EXIT_OPTIMIZER, EXIT_SELFTEST = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


@dataclass
class RunConfig:
    """Everything needed to reproduce a ``minimize`` run."""

    n: list
    restarts: int = 20
    max_iters: int = 20000
    grad_tol: float = 1e-9
    seed: int = 0
    init: str = "spiral"
    step0: float | None = None
    armijo_c: float = 1e-4
    shrink: float = 0.5
    lbfgs_memory: int = 0
    outdir: str = "."

    def options(self, workers=None):
        return MinimizeOptions(
            restarts=self.restarts,
            max_iters=self.max_iters,
            grad_tol=self.grad_tol,
            seed=self.seed,
            init=self.init,
            step0=self.step0,
            armijo_c=self.armijo_c,
            shrink=self.shrink,
            lbfgs_memory=self.lbfgs_memory,
            workers=workers,
        )

    def to_json(self):
        return dumps(asdict(self))

    @classmethod
    def from_json(cls, text):
        return cls(**json.loads(text))


def dumps(obj):
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def write_atomic(path, text):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_energies(path):
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    for row in rows:
        row["n"] = int(row["n"])
        row["seed"] = int(row["seed"])
        row["energy"] = float(row["energy"])
        row["min_separation"] = float(row["min_separation"])
        row["converged"] = row["converged"] == "true"
    return rows


def append_energies(path, new_rows):
    """Append rows to the sweep table; an existing ``(n, seed)`` pair is an error."""
    path = Path(path)
    existing = read_energies(path) if path.exists() else []
    seen = {(r["n"], r["seed"]) for r in existing}
    for r in new_rows:
        if (r["n"], r["seed"]) in seen:
            raise UsageError(f"{path} already has a row for n={r['n']} seed={r['seed']}")
    lines = [",".join(CSV_FIELDS)]
    for r in existing + list(new_rows):
        lines.append(
            f"{r['n']},{r['seed']},{r['energy']!r},{r['min_separation']!r},"
            f"{'true' if r['converged'] else 'false'}"
        )
    write_atomic(path, "\n".join(lines) + "\n")


def config_record(cfg, n, res):
    return {
        "n": n,
        "points": res.best.tolist(),
        "energy": res.energy,
        "grad_norm": res.grad_norm,
        "min_separation": res.min_separation,
        "converged": res.converged,
        "iterations": res.iterations,
        "restarts_used": res.restarts_used,
        "seed": cfg.seed,
        "options": {k: v for k, v in asdict(cfg).items() if k not in ("n", "outdir")},
        "metadata": {
            "created": datetime.datetime.now(datetime.timezone.utc).isoformat(),
            "version": __version__,
        },
    }


def cmd_minimize(args):
    if args.from_config:
        data = json.loads(Path(args.from_config).read_text(encoding="utf-8"))
        if "options" in data:
            # a config_<n>.json written by a previous run
            fields = dict(data["options"], n=[data["n"]])
        else:
            fields = data
        cfg = RunConfig(**{k: v for k, v in fields.items() if k in RunConfig.__dataclass_fields__})
        if args.outdir is not None:
            cfg.outdir = args.outdir
    else:
        if not args.n:
            raise UsageError("minimize needs -n or --from-config")
        cfg = RunConfig(
            n=list(args.n),
            restarts=args.restarts,
            max_iters=args.max_iters,
            grad_tol=args.grad_tol,
            seed=args.seed,
            init=args.init,
            step0=args.step0,
            armijo_c=args.armijo_c,
            shrink=args.shrink,
            lbfgs_memory=args.lbfgs_memory,
            outdir=args.outdir or ".",
        )
    if any(n < 2 for n in cfg.n):
        raise UsageError("every n must be >= 2")
    try:
        opts = cfg.options(workers=args.workers)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    outdir = Path(cfg.outdir)
    csv_path = outdir / "energies.csv"
    if csv_path.exists():
        seen = {(r["n"], r["seed"]) for r in read_energies(csv_path)}
        dup = [n for n in cfg.n if (n, cfg.seed) in seen]
        if dup:
            raise UsageError(f"{csv_path} already has rows for n={dup} seed={cfg.seed}")

    rows, failed = [], []
    for n in cfg.n:
        try:
            res = minimize_log_energy(n, opts)
        except NoProgress as exc:
            print(f"n={n}: {exc}", file=sys.stderr)
            failed.append(n)
            continue
        write_atomic(outdir / f"config_{n}.json", dumps(config_record(cfg, n, res)))
        rows.append(
            {
                "n": n,
                "seed": cfg.seed,
                "energy": res.energy,
                "min_separation": res.min_separation,
                "converged": res.converged,
            }
        )
        print(
            f"n={n} energy={res.energy!r} grad_norm={res.grad_norm:.3e} "
            f"min_separation={res.min_separation:.6f} converged={res.converged}"
        )
    if rows:
        append_energies(csv_path, rows)
    return EXIT_OPTIMIZER if failed else EXIT_OK


def cmd_lattice(args):
    if args.constants:
        for k, v in paper_constants().as_dict().items():
            print(f"{k} = {v!r}")
        return EXIT_OK
    try:
        if args.basis:
            lat = BravaisLattice(tuple(args.basis[:2]), tuple(args.basis[2:]))
        elif args.tau:
            lat = LatticeShape.from_tau(complex(*args.tau)).basis()
        elif args.square:
            lat = square_lattice()
        else:
            lat = triangular_lattice()
        shape = reduce_lattice(lat)
    except (DegenerateBasis, DomainError) as exc:
        raise UsageError(str(exc)) from exc
    m = args.density if args.density is not None else shape.density
    if not m > 0:
        raise UsageError("density must be positive")
    print(f"tau = {shape.tau.real!r} + {shape.tau.imag!r}i")
    print(f"density = {shape.density!r}")
    for label, dens in (("1/(2pi)", 1.0 / (2.0 * math.pi)), ("1", 1.0), (repr(m), m)):
        print(f"W[m={label}] = {w_lattice(LatticeShape(shape.tau, dens))!r}")
    return EXIT_OK


def _load_configs(directory, ns):
    out = {}
    for n in ns:
        p = Path(directory) / f"config_{n}.json"
        if p.exists():
            out[n] = np.array(json.loads(p.read_text(encoding="utf-8"))["points"])
    return out


def cmd_fit(args):
    path = Path(args.csv)
    if not path.exists():
        raise UsageError(f"no such file: {path}")
    try:
        rows = read_energies(path)
    except (KeyError, ValueError) as exc:
        raise UsageError(f"malformed table {path}: {exc}") from exc
    best = {}
    for r in rows:
        if r["n"] not in best or r["energy"] < best[r["n"]]:
            best[r["n"]] = r["energy"]
    table = sorted(best.items())
    configs = _load_configs(path.parent, best) if args.with_configs else None
    slack = args.slack if args.slack_upper is None else (args.slack, args.slack_upper)
    try:
        report = expansion_report(table, model=args.model, slack=slack, configs=configs)
    except InsufficientData as exc:
        raise UsageError(str(exc)) from exc
    out = Path(args.out) if args.out else path.with_name("report.json")
    write_atomic(out, dumps(report))
    print(
        f"C_hat={report['c_hat']!r} bounds=[{report['lower_bound_c']!r},{report['upper_bound_c']!r}] "
        f"within={str(report['within_bounds']).lower()}"
    )
    return EXIT_OK


def cmd_selftest(args):
    results = run_all(seed=args.seed)
    width = max(len(k) for k in results)
    for name, (r, tol, ok) in results.items():
        print(f"{name:<{width}}  {'PASS' if ok else 'FAIL'}  max_residual={r:.3e}  tol={tol:.0e}")
    return EXIT_OK if all(ok for _, _, ok in results.values()) else EXIT_SELFTEST


def build_parser():
    p = _Parser(prog="logsphere", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    m = sub.add_parser("minimize", help="minimize the sphere log energy for one or more n")
    m.add_argument("-n", type=int, nargs="+")
    m.add_argument("--restarts", type=int, default=20)
    m.add_argument("--max-iters", type=int, default=20000)
    m.add_argument("--grad-tol", type=float, default=1e-9)
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--init", choices=("spiral", "random"), default="spiral")
    m.add_argument("--step0", type=float)
    m.add_argument("--armijo-c", type=float, default=1e-4)
    m.add_argument("--shrink", type=float, default=0.5)
    m.add_argument("--lbfgs-memory", type=int, default=0)
    m.add_argument("--workers", type=int, help="parallel restarts (default: $LOGSPHERE_THREADS or 1)")
    m.add_argument("--outdir")
    m.add_argument("--from-config", help="rerun with the options stored in a config JSON")
    m.set_defaults(func=cmd_minimize)

    lat = sub.add_parser("lattice", help="renormalized energy of a Bravais lattice")
    g = lat.add_mutually_exclusive_group()
    g.add_argument("--triangular", action="store_true")
    g.add_argument("--square", action="store_true")
    g.add_argument("--basis", type=float, nargs=4, metavar=("U1", "U2", "V1", "V2"))
    g.add_argument("--tau", type=float, nargs=2, metavar=("RE", "IM"))
    g.add_argument("--constants", action="store_true")
    lat.add_argument("--density", type=float)
    lat.set_defaults(func=cmd_lattice)

    f = sub.add_parser("fit", help="fit the order-n constant from energies.csv")
    f.add_argument("csv")
    f.add_argument("--model", choices=("power", "mean"), default="power")
    f.add_argument("--slack", type=float, default=0.05)
    f.add_argument("--slack-upper", type=float)
    f.add_argument("--out")
    f.add_argument("--with-configs", action="store_true", help="add splitting terms from config_<n>.json")
    f.set_defaults(func=cmd_fit)

    s = sub.add_parser("selftest", help="run the identity suites")
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_selftest)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not getattr(args, "command", None):
            parser.print_help(sys.stderr)
            return EXIT_USAGE
        return args.func(args)
    except UsageError as exc:
        print(f"logsphere: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
