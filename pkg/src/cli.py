"""
Command line interface for the potential-algebra spectra toolkit.
"""

import argparse
import sys
import time
from datetime import datetime
from fractions import Fraction
from typing import Any, Dict, List, Optional

import numpy as np

from . import __version__
from .envelope import OutputEnvelope, OutputFile, render_csv
from .errors import InvalidInputError, SpectralAlgebraError
from .ladder import normalize, rodrigues_chain
from .models import (
    SWEEP_COLUMNS, Family, Grid, HalfInteger, Mode, ModelParams, OracleConfig,
    Scheme,
)
from .oracle import default_grid, verify
from .potentials import potential
from .representation import (
    bound_state_window, canonical_representations, classify, excluded_bands,
    nu_max, one_dim_special_root, spectrum,
)
from .storage import ResultStore
from .sweep import Sweeper, build_points, parse_range
from .tables import TableRenderer

# Sample count when --grid is not given for wavefunction/potential output
DEFAULT_SAMPLES = 1000
MAX_NU_VALUES = 10000

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_VERIFY_FAILED = 3

GRID_HELP = 'Samples "a,b,n": n interior points of (a, b); write --grid=-5,5,200 when a < 0'


def parse_grid(text: str) -> Grid:
    """"a,b,n" -> Grid; a and b may be fractions such as 0 or -30."""
    parts = text.split(',')
    if len(parts) != 3:
        raise InvalidInputError(f"grid must look like a,b,n (got {text!r})")
    try:
        a, b = float(Fraction(parts[0].strip())), float(Fraction(parts[1].strip()))
        n = int(parts[2])
    except (ValueError, ZeroDivisionError):
        raise InvalidInputError(f"grid has a non-numeric part: {text!r}")
    return Grid(a, b, n)


def parse_fraction(text: str, what: str) -> Fraction:
    """Exact rational from "p/q", an integer or a decimal."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise InvalidInputError(f"{what} is not a number: {text!r}")


def parse_nu(text: str):
    """Exact HalfInteger when possible, otherwise a float label."""
    value = parse_fraction(text, "nu")
    return HalfInteger.from_number(value) or float(value)


def _params(args, j: Optional[str] = None) -> ModelParams:
    return ModelParams.create(args.family, args.j if j is None else j, args.g)


def _emit(args, command: str, params: Dict[str, Any], payload: Any,
          warnings: List[str] = None, started: float = None):
    run = None
    if getattr(args, 'verbose', False) and started is not None:
        run = {
            'version': __version__,
            'started_at': datetime.fromtimestamp(started).isoformat(),
            'duration_seconds': round(time.time() - started, 6),
        }
    envelope = OutputEnvelope(command, params, payload, list(warnings or []), run)
    OutputFile(args.out).write(envelope.render())


def _warn(message: str):
    print(f"WARNING: {message}", file=sys.stderr)


def cmd_classify(args) -> int:
    """Classify representations over a nu list, or list the canonical ones."""
    started = time.time()
    params = ModelParams.create(args.family, "1/2", args.g).validate()
    family = params.family

    if args.nu is not None:
        reps = [classify(params, parse_nu(args.nu))]
    elif args.nu_min is not None or args.nu_max is not None:
        lo = parse_fraction(args.nu_min, "--nu-min") if args.nu_min is not None else Fraction(1, 2)
        hi = parse_fraction(args.nu_max, "--nu-max") if args.nu_max is not None else lo
        step = parse_fraction(args.nu_step, "--nu-step")
        if step <= 0 or hi < lo:
            raise InvalidInputError("need nu-min <= nu-max and a positive nu-step")
        count = int((hi - lo) / step) + 1
        if count > MAX_NU_VALUES:
            raise InvalidInputError(f"nu range has {count} values; limit is {MAX_NU_VALUES}")
        values = [lo + k * step for k in range(count)]
        reps = [classify(params, v) for v in values]
    else:
        reps = canonical_representations(family, params.g, args.count)

    payload: Dict[str, Any] = {'representations': [r.to_dict() for r in reps]}
    if family.shares_hyperbolic_algebra:
        top = nu_max(params.g_fraction)
        roots = one_dim_special_root(params.g)
        payload['nu_max'] = None if top is None else str(top)
        payload['excluded_bands'] = [list(band) for band in excluded_bands(params.g)]
        payload['special_root'] = None if roots is None else {'j': roots[0], 'mirror': roots[1]}

    echo = {'family': family.value, 'g': params.echo()['g']}
    if args.format == 'table':
        OutputFile(args.out).write(TableRenderer().classify(echo, payload))
        return EXIT_OK
    _emit(args, 'classify', echo, payload, started=started)
    return EXIT_OK


def cmd_spectrum(args) -> int:
    """Bound-state energies from the representation theory."""
    started = time.time()
    params = _params(args)
    mode = Mode(args.mode)
    report = spectrum(params, n_max=args.n_max, mode=mode)
    payload = report.to_dict()
    payload['window'] = bound_state_window(params).to_dict()
    echo = dict(params.echo(), n_max=args.n_max, mode=mode.value)

    if args.format == 'csv':
        rows = [(line.n, line.energy, line.j_end) for line in report.lines]
        OutputFile(args.out).write(render_csv(('n', 'energy', 'j_end'), rows))
    elif args.format == 'table':
        OutputFile(args.out).write(TableRenderer().spectrum(echo, payload))
    else:
        _emit(args, 'spectrum', echo, payload, list(report.warnings), started)
    for warning in report.warnings:
        _warn(warning)
    return EXIT_OK


def cmd_wavefunction(args) -> int:
    """Sample the level-n eigenfunction built by the ladder chain."""
    started = time.time()
    params = _params(args)
    mode = Mode(args.mode)
    psi = rodrigues_chain(params, args.n, mode)
    grid = parse_grid(args.grid) if args.grid else default_grid(params, args.n + 1, DEFAULT_SAMPLES)
    xs = grid.points()

    norm = None
    if args.normalize:
        psi, norm = normalize(psi, samples=xs)
    values = psi(xs)

    echo = dict(params.echo(), n=args.n, mode=mode.value)
    if args.format == 'csv':
        OutputFile(args.out).write(render_csv(('x', 'psi'), zip(xs.tolist(), values.tolist())))
        return EXIT_OK
    payload = {
        'n': args.n,
        'energy': psi.label.get('energy'),
        'grid': grid.to_dict(),
        'normalized': bool(args.normalize),
        'norm': norm,
        'x': xs,
        'psi': values,
    }
    _emit(args, 'wavefunction', echo, payload, started=started)
    return EXIT_OK


def cmd_potential(args) -> int:
    """Potential samples plus the level lines of the spectrum."""
    started = time.time()
    params = _params(args).validate(require_bound_state=False)
    mode = Mode(args.mode)
    grid = parse_grid(args.grid) if args.grid else default_grid(params, args.n_max + 1, DEFAULT_SAMPLES)
    xs = grid.points()
    values = np.asarray(potential(params, xs))

    warnings = []
    try:
        levels = list(spectrum(params, n_max=args.n_max, mode=mode).energies)
    except SpectralAlgebraError as e:
        levels = []
        warnings.append(f"no level lines: {e}")
        _warn(warnings[-1])

    echo = dict(params.echo(), n_max=args.n_max, mode=mode.value)
    if args.format == 'json':
        payload = {'grid': grid.to_dict(), 'levels': levels, 'x': xs, 'potential': values}
        _emit(args, 'potential', echo, payload, warnings, started)
        return EXIT_OK
    header = ['x', 'potential'] + [f"E{n}" for n in range(len(levels))]
    rows = ([x, v] + levels for x, v in zip(xs.tolist(), values.tolist()))
    OutputFile(args.out).write(render_csv(header, rows))
    return EXIT_OK


def _oracle_config(args) -> OracleConfig:
    options = {
        'grid_points': args.grid_points,
        'scheme': Scheme(args.scheme),
        'mode': Mode(args.mode),
        'richardson': not args.no_richardson,
    }
    if args.tol_rel is not None:
        options['tol_rel'] = args.tol_rel
    if args.grid:
        options['grid'] = parse_grid(args.grid)
    return OracleConfig(**options)


def cmd_verify(args) -> int:
    """Check algebraic energies against the numerical oracle."""
    started = time.time()
    params = _params(args)
    config = _oracle_config(args)
    report = verify(params, args.levels, config, probe=args.probe_excluded)
    payload = report.to_dict()
    echo = dict(params.echo(), levels=args.levels, probe_excluded=args.probe_excluded)

    if args.db:
        store = ResultStore(args.db)
        try:
            run_id = store.start_run('verify', params.family.value, echo)
            store.save_verification(run_id, report)
        finally:
            store.close()

    if args.format == 'table':
        OutputFile(args.out).write(TableRenderer().verify(echo, payload))
    else:
        _emit(args, 'verify', echo, payload, started=started)
    return EXIT_OK if report.passed else EXIT_VERIFY_FAILED


def cmd_sweep(args) -> int:
    """Classification and spectra over a range of g or j."""
    family = Family.parse(args.family)
    if args.g_range is not None:
        g_values = parse_range(args.g_range)
        j_values = [None if args.j is None else parse_fraction(args.j, "--j")]
    else:
        if args.g is None:
            raise InvalidInputError("--j-range needs --g")
        g_values = [parse_fraction(args.g, "--g")]
        j_values = parse_range(args.j_range)
    points = build_points(g_values, j_values) if j_values else []

    config = OracleConfig(mode=Mode(args.mode), grid_points=args.grid_points)
    sweeper = Sweeper(config, family, run_verification=args.verify)
    rows = sweeper.run(points, workers=args.workers, verbose=args.verbose)

    if args.db:
        store = ResultStore(args.db)
        try:
            echo = {'family': family.value, 'g_range': args.g_range, 'j_range': args.j_range,
                    'j': args.j, 'g': args.g, 'verify': args.verify}
            run_id = store.start_run('sweep', family.value, echo)
            store.save_sweep_rows(run_id, rows)
        finally:
            store.close()

    if args.format == 'json':
        echo = {'family': family.value, 'g_range': args.g_range, 'j_range': args.j_range,
                'j': args.j, 'g': args.g}
        _emit(args, 'sweep', echo, {'columns': list(SWEEP_COLUMNS),
                                    'rows': [r.to_dict() for r in rows]})
    else:
        table = ([getattr(r, c) for c in SWEEP_COLUMNS] for r in rows)
        OutputFile(args.out).write(render_csv(SWEEP_COLUMNS, table))
    failed = any(r.verified is False for r in rows)
    return EXIT_VERIFY_FAILED if failed else EXIT_OK


def cmd_results(args) -> int:
    """List stored runs or show one of them."""
    store = ResultStore(args.db)
    try:
        if args.run_id is not None:
            run = store.require_run(args.run_id)
            if args.format == 'table':
                OutputFile(args.out).write(TableRenderer().run(run))
            else:
                _emit(args, 'results', {'db': args.db, 'run_id': args.run_id}, run)
            return EXIT_OK
        runs = store.list_runs()
    finally:
        store.close()
    if args.format == 'table':
        OutputFile(args.out).write(TableRenderer().runs(runs))
    else:
        _emit(args, 'results', {'db': args.db}, {'runs': runs})
    return EXIT_OK


def _add_common(p, formats, default_format='json', needs_j=True):
    p.add_argument('--family', required=True,
                   help='flat | spherical | hyperbolic | rosen-morse')
    p.add_argument('--g', required=True, help='Coupling g, e.g. 9 or 4/25')
    if needs_j:
        p.add_argument('--j', required=True, help='Angular parameter j, e.g. 3/2 or 0.2')
    _add_output(p, formats, default_format)


def _add_output(p, formats, default_format='json'):
    p.add_argument('--format', choices=formats, default=default_format,
                   help=f'Output format (default: {default_format})')
    p.add_argument('--out', help='Write output atomically to this file (default: stdout)')
    p.add_argument('--verbose', '-v', action='store_true',
                   help='Add run metadata to the envelope and progress to stderr')


def _add_mode(p):
    p.add_argument('--mode', choices=[m.value for m in Mode], default=Mode.STRICT.value,
                   help='strict: quantized j only; extended: closed forms beyond it '
                        '(default: strict)')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description='Potential-algebra spectra for the Kepler and Rosen-Morse problems',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Representations of the hyperbolic algebra at g=9
  %(prog)s classify --family hyperbolic --g 9 --nu-max 4

  # Energies from ladder termination
  %(prog)s spectrum --family rosen-morse --j 4 --g 1
  %(prog)s spectrum --family flat --j 1/2 --g 1 --n-max 2

  # Eigenfunction samples and potential curves (plot-ready CSV)
  %(prog)s wavefunction --family flat --j 1/2 --g 1 --n 1 --normalize --format csv
  %(prog)s potential --family rosen-morse --j 4 --g 1

  # Check the algebra against the numerical oracle (exit 3 on mismatch)
  %(prog)s verify --family hyperbolic --j 3/2 --g 9
  %(prog)s verify --family hyperbolic --g 4 --j 2.5 --probe-excluded

  # Sweep g and keep the rows
  %(prog)s sweep --family hyperbolic --g-range 0.05:0.25:21 --db runs.duckdb
  %(prog)s results --db runs.duckdb
        """
    )
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    subparsers = parser.add_subparsers(dest='command', help='Command')

    # Classify
    classify_p = subparsers.add_parser('classify', help='Classify algebra representations')
    _add_common(classify_p, ['json', 'table'], needs_j=False)
    classify_p.add_argument('--nu', help='Single representation label')
    classify_p.add_argument('--nu-min', help='Range start (default: 1/2)')
    classify_p.add_argument('--nu-max', help='Range end')
    classify_p.add_argument('--nu-step', default='1/2', help='Range step (default: 1/2)')
    classify_p.add_argument('--count', type=int, default=3,
                            help='Finite representations listed for flat/spherical (default: 3)')
    classify_p.set_defaults(func=cmd_classify)

    # Spectrum
    spectrum_p = subparsers.add_parser('spectrum', help='Bound-state energies')
    _add_common(spectrum_p, ['json', 'csv', 'table'])
    spectrum_p.add_argument('--n-max', type=int,
                            help='Highest level (required for flat/spherical)')
    _add_mode(spectrum_p)
    spectrum_p.set_defaults(func=cmd_spectrum)

    # Wavefunction
    wave_p = subparsers.add_parser('wavefunction', help='Sample a ladder-chain eigenfunction')
    _add_common(wave_p, ['json', 'csv'])
    wave_p.add_argument('--n', type=int, required=True, help='Level n')
    wave_p.add_argument('--grid', help=GRID_HELP)
    wave_p.add_argument('--normalize', action='store_true',
                        help='Unit L2 norm over the emitted samples')
    _add_mode(wave_p)
    wave_p.set_defaults(func=cmd_wavefunction)

    # Potential
    potential_p = subparsers.add_parser('potential', help='Potential curve and level lines')
    _add_common(potential_p, ['csv', 'json'], default_format='csv')
    potential_p.add_argument('--grid', help=GRID_HELP)
    potential_p.add_argument('--n-max', type=int, default=3,
                             help='Highest level line (default: 3)')
    _add_mode(potential_p)
    potential_p.set_defaults(func=cmd_potential)

    # Verify
    verify_p = subparsers.add_parser('verify', help='Compare against the numerical oracle')
    _add_common(verify_p, ['json', 'table'])
    verify_p.add_argument('--levels', type=int,
                          help='Levels to check (default: all for hyperbolic/rosen-morse, 3 otherwise)')
    verify_p.add_argument('--probe-excluded', action='store_true',
                          help='Expect no bound state at all (excluded-region probe)')
    verify_p.add_argument('--scheme', choices=[s.value for s in Scheme], default='auto',
                          help='Discretization (default: auto)')
    verify_p.add_argument('--grid', help='Override the grid "a,b,n"')
    verify_p.add_argument('--grid-points', type=int, default=4000,
                          help='Interior points of the default grid (default: 4000)')
    verify_p.add_argument('--tol-rel', type=float,
                          help='Relative tolerance (default: 1e-3 or $SPECALG_DEFAULT_TOL)')
    verify_p.add_argument('--no-richardson', action='store_true',
                          help='Skip the half-spacing convergence check')
    verify_p.add_argument('--db', help='Store the report in this DuckDB file')
    _add_mode(verify_p)
    verify_p.set_defaults(func=cmd_verify)

    # Sweep
    sweep_p = subparsers.add_parser('sweep', help='Sweep g or j (CSV rows)')
    sweep_p.add_argument('--family', required=True,
                         help='flat | spherical | hyperbolic | rosen-morse')
    ranges = sweep_p.add_mutually_exclusive_group(required=True)
    ranges.add_argument('--g-range', help='start:stop:count')
    ranges.add_argument('--j-range', help='start:stop:count (needs --g)')
    sweep_p.add_argument('--g', help='Fixed g for --j-range')
    sweep_p.add_argument('--j', help='Fixed j for --g-range (default: canonical per family)')
    sweep_p.add_argument('--verify', action='store_true', help='Run the oracle per point')
    sweep_p.add_argument('--workers', type=int, help='Worker threads (default: auto)')
    sweep_p.add_argument('--grid-points', type=int, default=4000,
                         help='Oracle grid points with --verify (default: 4000)')
    sweep_p.add_argument('--db', help='Store rows in this DuckDB file')
    _add_mode(sweep_p)
    _add_output(sweep_p, ['csv', 'json'], default_format='csv')
    sweep_p.set_defaults(func=cmd_sweep)

    # Results
    results_p = subparsers.add_parser('results', help='Stored sweep and verification runs')
    results_p.add_argument('--db', required=True, help='DuckDB file')
    results_p.add_argument('--run-id', type=int, help='Show one run')
    _add_output(results_p, ['json', 'table'])
    results_p.set_defaults(func=cmd_results)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if not args.command:
        parser.print_help()
        return EXIT_OK

    try:
        return args.func(args)
    except SpectralAlgebraError as e:
        print(f"ERROR: {e}", file=sys.stderr)
        return EXIT_INVALID
    except ImportError as e:
        print(f"ERROR: {e}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == '__main__':
    sys.exit(main())
