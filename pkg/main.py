"""
Main entry point for the Hirzebruch staircase toolkit.

This script provides:
1. Exact ECH capacities of H_b and the capacity lower bound for c_{H_b}(z)
2. Class tools: obstruction curves, Cremona reduction, class searches
3. Staircase families, blocking intervals, accumulation points, symmetries
4. Finite-range verification for X = 5 H_{1/5} and SVG plots of sampled curves

Usage:
    python main.py caps --b 1/5 --scale 5 --count 25
    python main.py embed-lower --caps caps.json --zmin 1 --zmax 8 --step 1/20 --out lower.csv --with-volume
    python main.py reduce --class "48,14;111/19"
    python main.py staircase --spec U:u:0:short --kmax 4 --verify
    python main.py plot --in lower.csv,mu.csv --out figure.svg
"""

import argparse
import sys
from fractions import Fraction
from pathlib import Path
from typing import Callable, List, Optional, TypeVar

from dotenv import load_dotenv

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent))

# Load environment variables before the logger reads its settings
load_dotenv()

from pydantic import ValidationError  # noqa: E402

from config.settings import get_settings  # noqa: E402
from core.accumulation import Branch, acc, acc_inv  # noqa: E402
from core.cfweights import cf_to_rational, parse_cf_literal, rational_to_cf  # noqa: E402
from core.classes import (  # noqa: E402
    QuasiPerfectClass,
    classes_with_cf_in_range,
    dm_from_center,
    find_dm_from_k,
    find_pq_from_dm,
    make_quasi_perfect,
    parse_class_spec,
    search_ending,
)
from core.cremona import format_move_log, reduce  # noqa: E402
from core.echcap import min_obstructing_index, toric_caps  # noqa: E402
from core.errors import StaircaseError, UsageError  # noqa: E402
from core.exactnum import format_decimal, format_rational, parse_rational, parse_surd  # noqa: E402
from core.staircase import (  # noqa: E402
    Direction,
    Family,
    StairFamilySpec,
    SymmetryMap,
    blocking_class,
    blocking_interval,
    blocking_interval_generic,
    fibonacci_staircase,
    prestaircase_extension,
    prestaircase_generate,
    prestaircase_limits,
    staircase_one_third,
    symmetry_apply,
    symmetry_apply_class,
)
from ingest.b15_verifier import DEFAULT_Z_SAMPLES, verify_b15  # noqa: E402
from ingest.family_validator import staircase_verify  # noqa: E402
from ingest.file_store import FileStore, emit_curve_csv  # noqa: E402
from ingest.models import BlockingReport  # noqa: E402
from services.curve_service import CurveService  # noqa: E402
from services.plot_service import emit_svg  # noqa: E402
from utils.logger import get_logger, set_log_level  # noqa: E402


T = TypeVar("T")


class StaircaseArgumentParser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors exit with status 1."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _parsed(parse: Callable[[str], T], text: str, what: str) -> T:
    """Apply a literal parser, turning plain ValueErrors into usage errors."""
    try:
        return parse(text)
    except StaircaseError:
        raise
    except ValueError as e:
        raise UsageError(f"invalid {what}: {e}") from None


def create_argument_parser() -> argparse.ArgumentParser:
    """Create command-line argument parser."""
    parser = StaircaseArgumentParser(
        description="Exact tools for ellipsoid embeddings into Hirzebruch surfaces and their staircases",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Capacities and the lower bound
  python main.py caps --b 1/5 --scale 5 --count 25          # JSON to stdout
  python main.py caps --b 5/11 --count 300 --out caps.json
  python main.py embed-lower --caps caps.json --zmin 6 --zmax 8 --step 1/50 --out lower.csv --with-volume
  python main.py min-obstructing-k --b 3/10 --caps caps3.json

  # Classes
  python main.py obstruction --class "3,2;6" --b 5/11 --zmin 6 --zmax 8 --step 1/50 --out mu.csv
  python main.py reduce --class "73,20;170/29" --log
  python main.py find-classes --k 5
  python main.py find-classes --cf "[5;1,6]" --ending "5,1"
  python main.py find-classes --range 6 7 --qmin 1 --qmax 40

  # Staircases and accumulation points
  python main.py staircase --spec E:u:0:short --kmax 5 --verify
  python main.py blocking --family U --n 0
  python main.py acc --b 1/5
  python main.py acc-inv --z 6 --branch U
  python main.py symmetry --map Psi --z 7
  python main.py symmetry --map Sh --class "4,3;8"

  # Verification and plots
  python main.py verify-b15 --tmax 200
  python main.py plot --in lower.csv,mu.csv --out figure.svg

Exit codes: 0 success, 1 usage error, 2 mathematical domain error.
        """
    )
    parser.add_argument(
        '--log-level',
        choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'],
        default=None,
        help='Console log level (default: LOG_LEVEL or INFO)'
    )
    commands = parser.add_subparsers(dest='command', metavar='COMMAND', required=True)

    caps = commands.add_parser('caps', help='ECH capacities c_0..c_K of scale * H_b as JSON')
    caps.add_argument('--b', required=True, help='Parameter b as P/Q, 0 <= b < 1')
    caps.add_argument('--scale', default='1', help='Scale factor as P/Q (default: 1)')
    caps.add_argument('--count', type=int, required=True, help='Largest capacity index K')
    caps.add_argument('--out', help='Output JSON file (default: stdout)')
    caps.set_defaults(handler=run_caps)

    lower = commands.add_parser('embed-lower', help='Sample the capacity lower bound of c_{H_b}(z)')
    lower.add_argument('--caps', required=True, help='Capacity JSON written by caps')
    _add_grid_arguments(lower)
    lower.add_argument('--K', type=int, help='Capacity cut-off (default: every capacity in the file)')
    lower.add_argument('--with-volume', action='store_true', help='Add the volume curve')
    lower.add_argument('--with-acc-curve', action='store_true', help='Add the accumulation-point curve')
    lower.add_argument('--out', help='Output CSV file (default: stdout)')
    lower.set_defaults(handler=run_embed_lower)

    obstruction = commands.add_parser('obstruction', help='Sample class obstructions mu(z)')
    source = obstruction.add_mutually_exclusive_group(required=True)
    source.add_argument('--class', dest='class_spec', help='Class literal "d,m;p/q" or "d,m;[m1,...]"')
    source.add_argument('--k', type=int, help='Use every quasi-perfect class of capacity index k')
    obstruction.add_argument('--b', required=True, help='Parameter b as P/Q')
    _add_grid_arguments(obstruction)
    obstruction.add_argument('--out', help='Output CSV file (default: stdout)')
    obstruction.set_defaults(handler=run_obstruction)

    reduction = commands.add_parser('reduce', help='Cremona-reduce a class: EXCEPTIONAL or FAKE')
    reduction.add_argument('--class', dest='class_spec', required=True, help='Class literal')
    reduction.add_argument('--log', action='store_true', help='Print every reduction step')
    reduction.set_defaults(handler=run_reduce)

    find = commands.add_parser('find-classes', help='Search for quasi-perfect classes')
    how = find.add_mutually_exclusive_group(required=True)
    how.add_argument('--k', type=int, help='Classes of capacity index k')
    how.add_argument('--cf', help='Continued fraction literal of the center, e.g. "[5;1,6]"')
    how.add_argument('--range', nargs=2, metavar=('Z1', 'Z2'), help='Centers strictly between Z1 and Z2')
    find.add_argument('--ending', help='Extra terms appended to --cf, e.g. "5,1"')
    find.add_argument('--qmin', type=int, default=1, help='Smallest center denominator for --range (default: 1)')
    find.add_argument('--qmax', type=int, help='Largest center denominator for --range')
    find.set_defaults(handler=run_find_classes)

    staircase = commands.add_parser('staircase', help='Generate (and verify) a staircase family')
    which = staircase.add_mutually_exclusive_group(required=True)
    which.add_argument('--spec', help='Family spec F:dir:n[:end], e.g. U:u:0:short')
    which.add_argument('--one-third', type=int, choices=[0, 1, 2], help='Sequence i of the staircase at b = 1/3')
    staircase.add_argument('--kmax', type=int, required=True, help='Largest step index')
    staircase.add_argument('--verify', action='store_true', help='Run every family check and print the report')
    staircase.add_argument('--no-cremona', action='store_true', help='Skip Cremona reduction in --verify')
    staircase.set_defaults(handler=run_staircase)

    blocking = commands.add_parser('blocking', help='Blocked b-interval J and z-interval I of a class')
    blocker = blocking.add_mutually_exclusive_group(required=True)
    blocker.add_argument('--class', dest='class_spec', help='Quasi-perfect class literal "d,m;p/q"')
    blocker.add_argument('--family', choices=['U', 'L', 'E'], help='Blocking class family')
    blocking.add_argument('--n', type=int, help='Family index n')
    blocking.set_defaults(handler=run_blocking)

    acc_parser = commands.add_parser('acc', help='Accumulation point acc(b)')
    acc_parser.add_argument('--b', required=True, help='Parameter b as P/Q')
    acc_parser.set_defaults(handler=run_acc)

    acc_inv_parser = commands.add_parser('acc-inv', help='b on a branch with acc(b) = z')
    acc_inv_parser.add_argument('--z', required=True, help='Point z as P/Q or a+c*sqrt(D)')
    acc_inv_parser.add_argument('--branch', choices=['L', 'U'], required=True, help='Inverse branch')
    acc_inv_parser.set_defaults(handler=run_acc_inv)

    min_k = commands.add_parser('min-obstructing-k', help='Smallest capacity obstructing a staircase at b')
    min_k.add_argument('--b', required=True, help='Parameter b as P/Q')
    min_k.add_argument('--caps', required=True, help='Capacity JSON written by caps for the same b')
    min_k.add_argument('--K', type=int, help='Capacity cut-off (default: every capacity in the file)')
    min_k.set_defaults(handler=run_min_obstructing_k)

    b15 = commands.add_parser('verify-b15', help='Check the counting identities for 5 H_{1/5} up to T')
    b15.add_argument('--tmax', type=int, required=True, help='Largest t, at least 43')
    b15.add_argument('--z', nargs='+', help='z samples in (6, 6+eps) (default: 601/100 121/20 6049/1000)')
    b15.set_defaults(handler=run_verify_b15)

    plot = commands.add_parser('plot', help='Draw curve CSVs as one SVG')
    plot.add_argument('--in', dest='inputs', required=True, help='Comma-separated CSV files')
    plot.add_argument('--out', required=True, help='Output SVG file')
    plot.set_defaults(handler=run_plot)

    symmetry = commands.add_parser('symmetry', help='Apply Psi, Phi or Sh to z or to a class center')
    symmetry.add_argument('--map', choices=[m.value for m in SymmetryMap], required=True, help='Symmetry')
    point = symmetry.add_mutually_exclusive_group(required=True)
    point.add_argument('--z', help='Point z as P/Q or a+c*sqrt(D)')
    point.add_argument('--class', dest='class_spec', help='Quasi-perfect class literal "d,m;p/q"; its center is mapped')
    symmetry.set_defaults(handler=run_symmetry)

    return parser


def _add_grid_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--zmin', required=True, help='First sample point (P/Q)')
    parser.add_argument('--zmax', required=True, help='Last sample point (P/Q)')
    parser.add_argument('--step', required=True, help='Grid step (P/Q)')


def _grid(service: CurveService, args: argparse.Namespace) -> List[Fraction]:
    return service.grid(
        _parsed(parse_rational, args.zmin, "--zmin"),
        _parsed(parse_rational, args.zmax, "--zmax"),
        _parsed(parse_rational, args.step, "--step"),
    )


def _emit_text(text: str, out: Optional[str], what: str) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        print(f"✓ Wrote {what} to {out}", file=sys.stderr)


def _quasi_perfect(text: str) -> QuasiPerfectClass:
    c = _parsed(parse_class_spec, text, "class")
    if not isinstance(c, QuasiPerfectClass):
        raise UsageError(f"{text!r} is not a quasi-perfect class literal (use d,m;p/q)")
    return c


# -----------------------
# Command handlers
# -----------------------

def run_caps(args: argparse.Namespace) -> int:
    b = _parsed(parse_rational, args.b, "--b")
    scale = _parsed(parse_rational, args.scale, "--scale")
    table = toric_caps(b, scale, args.count)
    store = FileStore()
    if args.out is None:
        sys.stdout.write(store.render_capacity_file(table))
    else:
        store.write_capacity_file(table, args.out)
        print(f"✓ Wrote {table.count + 1} capacities to {args.out}", file=sys.stderr)
    return 0


def run_embed_lower(args: argparse.Namespace) -> int:
    table = FileStore().read_capacity_file(args.caps)
    service = CurveService()
    zs = _grid(service, args)
    series = [service.lower_bound_series(table, zs, args.K)]
    if args.with_volume:
        series.append(service.volume_series(table.b, zs))
    if args.with_acc_curve:
        series.append(service.acc_curve_series(table.b, zs))
    _emit_text(emit_curve_csv(series, args.out), args.out, f"{len(series)} series")
    return 0


def run_obstruction(args: argparse.Namespace) -> int:
    service = CurveService()
    b = _parsed(parse_rational, args.b, "--b")
    zs = _grid(service, args)
    if args.class_spec is not None:
        classes = [_parsed(parse_class_spec, args.class_spec, "class")]
    else:
        classes = service.classes_for_index(args.k)
    series = [service.obstruction_series(c, b, zs) for c in classes]
    _emit_text(emit_curve_csv(series, args.out), args.out, f"{len(series)} obstruction series")
    return 0


def run_reduce(args: argparse.Namespace) -> int:
    c = _parsed(parse_class_spec, args.class_spec, "class")
    result = reduce(c, get_settings().max_cremona_steps)
    if args.log:
        print(format_move_log(result.move_log))
    print(result.verdict.value)
    get_logger().info(f"{c}: {result.verdict.value} after {result.steps} moves ({result.reason})")
    return 0


def _print_class(c: QuasiPerfectClass) -> None:
    print(f"{c}  {rational_to_cf(c.center)}")


def run_find_classes(args: argparse.Namespace) -> int:
    if args.k is not None:
        for d, m in find_dm_from_k(args.k):
            centers = find_pq_from_dm(d, m)
            if not centers:
                print(f"({d},{m})  no quasi-perfect center")
            for p, q in centers:
                _print_class(make_quasi_perfect(d, m, p, q))
        return 0

    if args.cf is not None:
        head, cycle = _parsed(parse_cf_literal, args.cf, "--cf")
        if args.ending is not None:
            ending = _parsed(lambda text: [int(t) for t in text.split(",") if t.strip()], args.ending, "--ending")
            if cycle:
                raise UsageError("--ending needs a finite --cf")
            terms = head + ending
            pairs = search_ending(head, ending)
        else:
            if cycle:
                raise UsageError("a periodic --cf has no rational center; add a finite --ending")
            terms = head
            center = cf_to_rational(terms)
            pairs = dm_from_center(center.numerator, center.denominator)
        center = cf_to_rational(terms)
        if not pairs:
            print(f"no quasi-perfect class centered at {format_rational(center)}")
        for d, m in pairs:
            _print_class(make_quasi_perfect(d, m, center.numerator, center.denominator))
        return 0

    if args.qmax is None:
        raise UsageError("--range needs --qmax")
    z_low = _parsed(parse_rational, args.range[0], "Z1")
    z_high = _parsed(parse_rational, args.range[1], "Z2")
    records = classes_with_cf_in_range(z_low, z_high, args.qmin, args.qmax)
    for d, m, p, q, cf in records:
        print(f"{make_quasi_perfect(d, m, p, q)}  {cf}")
    get_logger().info(f"Found {len(records)} classes with centers in ({z_low}, {z_high})")
    return 0


def run_staircase(args: argparse.Namespace) -> int:
    if args.one_third is not None:
        if args.verify:
            raise UsageError("--verify applies to --spec families")
        for k, c in enumerate(staircase_one_third(args.one_third, args.kmax), start=1):
            print(f"{k}  {c}")
        return 0

    spec = _parsed(StairFamilySpec.parse, args.spec, "--spec")
    if args.verify:
        report = staircase_verify(spec, args.kmax, check_cremona=not args.no_cremona)
        print(report.model_dump_json(indent=2))
        print(f"{'✓' if report.is_valid else '✗'} {spec}: {len(report.errors)} errors", file=sys.stderr)
        return 0 if report.is_valid else 2

    is_fibonacci = spec.family == Family.L and spec.direction == Direction.LOWER and spec.n == 0
    if is_fibonacci:
        classes = fibonacci_staircase(args.kmax)
        get_logger().warning("L:l:0 is the Fibonacci stairs; no blocking class belongs to it")
    else:
        classes = prestaircase_generate(spec, args.kmax)
        extension = prestaircase_extension(spec)
        if extension is not None:
            if extension.numeric_only:
                print(f"-1  d={extension.d} m={extension.m} p={extension.p} q={extension.q}  (numeric only)")
            else:
                print(f"-1  {extension.klass}")
    for k, c in enumerate(classes):
        print(f"{k}  {c}")
    limits = prestaircase_limits(spec)
    print(f"b_inf = {limits.b_inf}")
    print(f"a_inf = {limits.a_inf}")
    return 0


def run_blocking(args: argparse.Namespace) -> int:
    if args.class_spec is not None:
        c = _quasi_perfect(args.class_spec)
        interval = blocking_interval_generic(c)
    else:
        if args.n is None:
            raise UsageError("--family needs --n")
        c = blocking_class(args.family, args.n)
        interval = blocking_interval(args.family, args.n)
    endpoints = {
        'b_low': interval.b_low,
        'b_high': interval.b_high,
        'z_low': interval.z_low,
        'z_high': interval.z_high,
    }
    report = BlockingReport(
        klass=str(c),
        exact=interval.exact,
        decimals={name: format_decimal(value) for name, value in endpoints.items()},
        **{name: str(value) for name, value in endpoints.items()},
    )
    print(report.model_dump_json(indent=2))
    return 0


def run_acc(args: argparse.Namespace) -> int:
    b = _parsed(parse_rational, args.b, "--b")
    print(acc(b, dps=get_settings().numeric_dps))
    return 0


def run_acc_inv(args: argparse.Namespace) -> int:
    z = _parsed(parse_surd, args.z, "--z")
    print(acc_inv(z, Branch(args.branch)))
    return 0


def run_min_obstructing_k(args: argparse.Namespace) -> int:
    b = _parsed(parse_rational, args.b, "--b")
    table = FileStore().read_capacity_file(args.caps)
    K = table.count if args.K is None else args.K
    print(min_obstructing_index(b, table, K))
    return 0


def run_verify_b15(args: argparse.Namespace) -> int:
    z_samples = DEFAULT_Z_SAMPLES
    if args.z:
        z_samples = [_parsed(parse_rational, text, "--z") for text in args.z]
    report = verify_b15(args.tmax, z_samples)
    print(report.model_dump_json(indent=2))
    return 0 if report.passed else 2


def run_plot(args: argparse.Namespace) -> int:
    inputs = [path.strip() for path in args.inputs.split(",") if path.strip()]
    if not inputs:
        raise UsageError("--in needs at least one CSV file")
    emit_svg(inputs, args.out)
    print(f"✓ Wrote {args.out}", file=sys.stderr)
    return 0


def run_symmetry(args: argparse.Namespace) -> int:
    if args.class_spec is not None:
        print(symmetry_apply_class(args.map, _quasi_perfect(args.class_spec)))
        return 0
    z = _parsed(parse_surd, args.z, "--z")
    print(symmetry_apply(args.map, z))
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point."""
    args = create_argument_parser().parse_args(argv)

    if args.log_level is not None:
        set_log_level(args.log_level)
    logger = get_logger()
    logger.debug(f"Command: {args.command}")

    try:
        get_settings()
        return args.handler(args)
    except KeyboardInterrupt:
        logger.info("Operation cancelled by user")
        return 0
    except StaircaseError as e:
        logger.error(str(e))
        print(f"✗ {e}", file=sys.stderr)
        return e.exit_code
    except (ValidationError, OSError) as e:
        logger.error(f"Invalid input: {e}")
        print(f"✗ {e}", file=sys.stderr)
        return 1
    except Exception as e:
        logger.error(f"An unhandled error occurred: {e}", exc_info=True)
        return 1


if __name__ == "__main__":
    sys.exit(main())
