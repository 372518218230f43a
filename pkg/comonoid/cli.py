"""Console surface: subcommands over structure files, reports on stdout, exit codes.

Exit codes: 0 affirmative, 1 negative with witness, 2 budget exceeded,
3 usage or parse error.
"""

import argparse
import logging
import sys
import traceback

from .analysis import (
    chain_family,
    chain_union,
    classify,
    continuum_witness,
    dominated_classes,
    infinite_crossword,
    strongly_indecomposable,
)
from .budget import Budget
from .closure import CheckStatus, ClosureRule, close, is_comonoid
from .constructions import (
    CoordinateFlavor,
    CxParams,
    CxPoint,
    antichain_family,
    coordinate_family,
    cx_evaluate,
    cx_separate,
    cx_stratum,
    down_up_union,
    grid_chains,
    omega_infty,
    order_comonoid,
    power_set,
    sunflower_extract,
    trivial_family,
)
from .core import GroundSet, Preorder, Word
from .crossword import SearchStatus, solve_diagonal, validate
from .errors import ComonoidError, HypothesisError, ParseError, SunflowerError
from .i18n.language_selector import get_language
from .i18n.loader import load_messages
from .lattice import is_free_family, partitioned_freeness
from .structure_file import format_structure, load, save

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_BUDGET = 2
EXIT_USAGE = 3

CATALOG = "comonoid_lab"

log = logging.getLogger(__name__)

messages = {}


def get_message(key, *args):
    """Get localized message with optional formatting"""
    msg = messages.get(key, key)
    if args:
        return msg.format(*args)
    return msg


def set_language(language=None):
    global messages
    messages = load_messages(CATALOG, get_language(language))


class UsageError(Exception):
    """Bad command line or command arguments"""


class CommandParser(argparse.ArgumentParser):
    """ArgumentParser that reports usage errors as exceptions instead of exiting with code 2"""

    def error(self, message):
        raise UsageError(message)


class Report:
    """Writes report lines; in machine mode only witness lines are written"""

    def __init__(self, machine=False):
        self.machine = machine

    def line(self, text=""):
        if not self.machine:
            print(text)

    def data(self, text):
        print(text)

    def word(self, word, indent="   "):
        if self.machine:
            print(word.to_bitstring())
        else:
            print(f"{indent}{word.to_bitstring() or '-'}  {word}")

    def words(self, words):
        for word in words:
            self.word(word)

    def crossword(self, crossword):
        self.line(get_message("crossword_header", crossword.diagonal().to_bitstring() or "-"))
        for row in crossword.to_bitstrings():
            if self.machine:
                print(row)
            else:
                print(f"   {row}")


def _ints(values, count, name):
    if len(values) != count:
        raise UsageError(get_message("gen_param_count", name, count, len(values)))
    try:
        return [int(value) for value in values]
    except ValueError as e:
        raise UsageError(get_message("not_an_integer", e)) from e


def _members(values):
    members = []
    for value in values:
        if value == "-":
            members.append(set())
            continue
        try:
            members.append({int(k) for k in value.split(",")})
        except ValueError as e:
            raise UsageError(get_message("not_an_integer", e)) from e
    return members


def build_construction(name, params, complements=False):
    """Family for a named construction and its parameters"""
    if name == "power-set":
        return power_set(*_ints(params, 1, name))
    if name == "trivial":
        return trivial_family(*_ints(params, 1, name))
    if name in ("chain-down", "chain-up"):
        (n,) = _ints(params, 1, name)
        return order_comonoid(Preorder.chain(n), name.split("-")[1])
    if name == "down-up":
        return down_up_union(*_ints(params, 1, name))
    if name == "omega-infty":
        return omega_infty(*_ints(params, 1, name))[1]
    if name == "coordinates":
        flavor = CoordinateFlavor.WITH_COMPLEMENTS if complements else CoordinateFlavor.E_ONLY
        return coordinate_family(*_ints(params, 1, name), flavor)[1]
    if name == "antichain":
        return antichain_family(_members(params))[1]
    if name == "grid":
        _, xs, ys = grid_chains(*_ints(params, 2, name))
        return chain_family(xs, ys)
    raise UsageError(get_message("gen_unknown", name, ", ".join(CONSTRUCTION_NAMES)))


CONSTRUCTION_NAMES = (
    "power-set",
    "trivial",
    "chain-down",
    "chain-up",
    "down-up",
    "omega-infty",
    "coordinates",
    "antichain",
    "grid",
)


def parse_word(ground, text):
    try:
        return Word.from_bitstring(ground, "" if text == "-" else text)
    except ComonoidError as e:
        raise UsageError(str(e)) from e


def cmd_gen(args, report, budget):
    family = build_construction(args.name, args.params, args.complements)
    if args.output:
        save(family, args.output)
        report.line(get_message("gen_saved", args.name, len(family), args.output))
    else:
        sys.stdout.write(format_structure(family))
    return EXIT_OK


def cmd_check(args, report, budget):
    family = load(args.file)
    result = is_comonoid(family, budget)
    if result.status is CheckStatus.OK:
        report.line(get_message("check_ok", len(family), family.ground.size))
        return EXIT_OK
    if result.status is CheckStatus.MISSING_CONSTANT:
        report.line(get_message("check_missing_constant"))
        report.word(result.missing)
        return EXIT_NEGATIVE
    if result.status is CheckStatus.COUNTEREXAMPLE:
        report.line(get_message("check_counterexample", result.crossword.diagonal().to_bitstring()))
        report.crossword(result.crossword)
        return EXIT_NEGATIVE
    report.line(get_message("budget_exceeded", budget.limit))
    return EXIT_BUDGET


def cmd_close(args, report, budget):
    family = load(args.file)
    result = close(family, budget)
    counts = result.rule_counts()
    if args.output:
        save(result.family, args.output)
    if result.certified:
        report.line(get_message("close_certified", len(result.family), result.rounds))
    else:
        report.line(get_message("close_partial", len(result.family), budget.limit))
    report.words(result.family)
    report.line(get_message("close_rules_header"))
    for rule in ClosureRule:
        report.line(f"   {rule.value}: {counts.get(rule, 0)}")
    return EXIT_OK if result.certified else EXIT_BUDGET


def cmd_solve(args, report, budget):
    family = load(args.file)
    target = parse_word(family.ground, args.target)
    result = solve_diagonal(family, target, budget)
    if result.status is SearchStatus.FOUND:
        report.line(get_message("solve_found", target.to_bitstring(), result.nodes))
        report.crossword(result.crossword)
        return EXIT_OK
    if result.status is SearchStatus.UNSAT:
        report.line(get_message("solve_unsat", target.to_bitstring()))
        return EXIT_NEGATIVE
    report.line(get_message("budget_exceeded", budget.limit))
    return EXIT_BUDGET


def _flag(value):
    return get_message("yes") if value else get_message("no")


def cmd_classify(args, report, budget):
    family = load(args.file)
    result = classify(family)
    report.line(get_message("classify_header", len(family), family.ground.size))
    report.line(f"   T1: {_flag(result.t1)}")
    if result.unseparated is not None:
        a, b = result.unseparated
        report.line(get_message("classify_unseparated", family.ground.label(a), family.ground.label(b)))
    report.line(f"   {get_message('discrete')}: {_flag(result.discrete)}")
    report.line(f"   {get_message('complement_closed')}: {_flag(result.complement_closed)}")
    if report.machine:
        report.data(" ".join(str(int(flag)) for flag in (result.t1, result.discrete, result.complement_closed)))
    return EXIT_OK


def cmd_analyze(args, report, budget):
    family = load(args.file)
    base = parse_word(family.ground, args.base) if args.base is not None else None
    info = strongly_indecomposable(family, base, dual=args.dual)
    key = "analyze_dual_header" if args.dual else "analyze_header"
    report.line(get_message(key, info.base.to_bitstring() or "-", len(info.elements), len(info.classes)))
    for index, members in enumerate(info.classes):
        report.line(get_message("analyze_class", index, len(members)))
        report.words(members)
    if args.element is not None:
        family.ground.check_index(args.element)
        dominated = dominated_classes(args.element, family)
        report.line(get_message("analyze_dominated", family.ground.label(args.element), len(dominated)))
        for entry in dominated:
            report.line(get_message("analyze_dominated_class", entry.index, entry.meet.to_bitstring() or "-", entry.meet))
    return EXIT_OK


def _chain_input(args):
    if args.grid:
        _, xs, ys = grid_chains(*args.grid)
        return xs, ys
    if args.size is None or not args.xs or not args.ys:
        raise UsageError(get_message("chains_input_required"))
    ground = GroundSet(args.size)
    return [parse_word(ground, text) for text in args.xs], [parse_word(ground, text) for text in args.ys]


def cmd_chains(args, report, budget):
    xs, ys = _chain_input(args)
    if args.op == "union":
        result = chain_union(xs, ys)
        report.line(get_message("chains_union", result.route))
        report.word(result.word)
        report.crossword(result.crossword)
        return EXIT_OK
    if args.op == "continuum":
        try:
            result = continuum_witness(xs, ys)
        except HypothesisError as e:
            m, n = e.witness
            report.line(get_message("chains_hypothesis", m, n))
            report.data(f"{m} {n}")
            return EXIT_NEGATIVE
        report.line(get_message("chains_indices", list(result.m), list(result.n)))
        report.line("   z:")
        report.word(result.z, "      ")
        for i, zi in enumerate(result.zs):
            report.line(f"   z_{i}:")
            report.word(zi, "      ")
        return EXIT_OK
    crossword = infinite_crossword(xs, ys)
    check = validate(crossword, chain_family(xs, ys))
    report.line(get_message("chains_crossword", _flag(check.is_crossword)))
    report.crossword(crossword)
    return EXIT_OK


def cmd_sunflower(args, report, budget):
    tuples = [tuple(entry.split(",")) for entry in args.tuples]
    try:
        result = sunflower_extract(tuples, args.threshold)
    except SunflowerError as e:
        report.line(get_message("sunflower_none", e))
        return EXIT_NEGATIVE
    report.line(get_message("sunflower_found", result.i, ",".join(result.core) or "-", len(result.tails)))
    report.line(get_message("sunflower_perm", list(result.perm)))
    for tail in result.tails:
        report.data("   " + ",".join(tail) if not report.machine else ",".join(tail))
    return EXIT_OK


def parse_point(text):
    """'n:γ,n:γ/bits' into a CxPoint"""
    if "/" not in text:
        raise UsageError(get_message("cx_point_syntax", text))
    head, bits = text.split("/", 1)
    try:
        pairs = [tuple(int(v) for v in item.split(":")) for item in head.split(",") if item]
        if any(len(pair) != 2 for pair in pairs) or set(bits) - {"0", "1"}:
            raise ValueError(text)
    except ValueError as e:
        raise UsageError(get_message("cx_point_syntax", text)) from e
    return CxPoint(tuple(pairs), tuple(int(b) for b in bits))


def _require(args, *names):
    missing = [f"--{name.replace('_', '-')}" for name in names if getattr(args, name) is None]
    if missing:
        raise UsageError(get_message("cx_missing", args.query, ", ".join(missing)))


def cmd_cx(args, report, budget):
    params = CxParams(args.L, args.gamma_max, args.m, args.n_bound)
    _require(args, "point")
    point = parse_point(args.point)
    if args.query == "eval":
        _require(args, "n", "gamma")
        value = cx_evaluate(params, args.n, args.gamma, point)
        report.line(get_message("cx_eval", args.n, args.gamma, value))
        if report.machine:
            report.data(str(value))
        return EXIT_OK
    if args.query == "stratum":
        _require(args, "beta")
        inside = cx_stratum(params, point, args.beta)
        report.line(get_message("cx_stratum", args.beta, _flag(inside)))
        return EXIT_OK if inside else EXIT_NEGATIVE
    _require(args, "other")
    result = cx_separate(params, point, parse_point(args.other))
    report.line(get_message("cx_separate", result.n, result.beta, result.bit))
    if report.machine:
        report.data(f"{result.n} {result.beta}")
    return EXIT_OK


def cmd_freeness(args, report, budget):
    family = load(args.file)
    if args.blocks:
        blocks = [_ints(block.split(","), len(block.split(",")), "blocks") for block in args.blocks]
        result = partitioned_freeness(family, blocks)
    else:
        result = is_free_family(family)
    if result.free:
        report.line(get_message("freeness_free", len(family)))
        return EXIT_OK
    report.line(get_message("freeness_relation", list(result.joins), list(result.meets)))
    report.line(get_message("freeness_joins"))
    report.words(family[k] for k in result.joins)
    report.line(get_message("freeness_meets"))
    report.words(family[k] for k in result.meets)
    return EXIT_NEGATIVE


def build_parser():
    parser = CommandParser(prog="comonoid_lab", description=get_message("description"))
    parser.add_argument("--budget", type=int, default=None, help=get_message("help_budget"))
    parser.add_argument("--machine", action="store_true", help=get_message("help_machine"))
    parser.add_argument("--debug", "-d", action="store_true", help=get_message("help_debug"))
    parser.add_argument("--lang", default=None, help=get_message("help_lang"))
    commands = parser.add_subparsers(dest="command", required=True)

    gen = commands.add_parser("gen", help=get_message("help_gen"))
    gen.add_argument("name", help=", ".join(CONSTRUCTION_NAMES))
    gen.add_argument("params", nargs="*")
    gen.add_argument("--complements", action="store_true")
    gen.add_argument("--output", "-o")
    gen.set_defaults(handler=cmd_gen)

    for name, handler in (("check", cmd_check), ("classify", cmd_classify)):
        sub = commands.add_parser(name, help=get_message(f"help_{name}"))
        sub.add_argument("file")
        sub.set_defaults(handler=handler)

    closing = commands.add_parser("close", help=get_message("help_close"))
    closing.add_argument("file")
    closing.add_argument("--output", "-o")
    closing.set_defaults(handler=cmd_close)

    solve = commands.add_parser("solve", help=get_message("help_solve"))
    solve.add_argument("file")
    solve.add_argument("target")
    solve.set_defaults(handler=cmd_solve)

    analyze = commands.add_parser("analyze", help=get_message("help_analyze"))
    analyze.add_argument("file")
    analyze.add_argument("--base")
    analyze.add_argument("--element", type=int)
    analyze.add_argument("--dual", action="store_true")
    analyze.set_defaults(handler=cmd_analyze)

    chains = commands.add_parser("chains", help=get_message("help_chains"))
    chains.add_argument("op", choices=("union", "continuum", "crossword"))
    chains.add_argument("--grid", type=int, nargs=2, metavar=("ROWS", "COLS"))
    chains.add_argument("--size", type=int)
    chains.add_argument("--xs", nargs="+")
    chains.add_argument("--ys", nargs="+")
    chains.set_defaults(handler=cmd_chains)

    sunflower = commands.add_parser("sunflower", help=get_message("help_sunflower"))
    sunflower.add_argument("tuples", nargs="+")
    sunflower.add_argument("--threshold", "-t", type=int, default=2)
    sunflower.set_defaults(handler=cmd_sunflower)

    cx = commands.add_parser("cx", help=get_message("help_cx"))
    cx.add_argument("query", choices=("eval", "stratum", "separate"))
    cx.add_argument("--L", type=int, default=2)
    cx.add_argument("--gamma-max", type=int, default=8)
    cx.add_argument("--m", type=int, default=2)
    cx.add_argument("--n-bound", type=int, default=4)
    cx.add_argument("--point")
    cx.add_argument("--other")
    cx.add_argument("--n", type=int)
    cx.add_argument("--gamma", type=int)
    cx.add_argument("--beta", type=int)
    cx.set_defaults(handler=cmd_cx)

    freeness = commands.add_parser("freeness", help=get_message("help_freeness"))
    freeness.add_argument("file")
    freeness.add_argument("--blocks", nargs="+")
    freeness.set_defaults(handler=cmd_freeness)
    return parser


def configure_logging(debug):
    logger = logging.getLogger("comonoid")
    for handler in [h for h in logger.handlers if getattr(h, "_comonoid_cli", False)]:
        logger.removeHandler(handler)
    logger.setLevel(logging.DEBUG if debug else logging.WARNING)
    if debug:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
        handler._comonoid_cli = True
        logger.addHandler(handler)


def run(argv=None):
    """Parse argv, run one command and return its exit code"""
    set_language()
    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        print(get_message("usage_error", e))
        return EXIT_USAGE
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_OK
    if args.lang:
        set_language(args.lang)
    configure_logging(args.debug)
    log.debug("command %s", args.command)
    report = Report(args.machine)
    if args.debug and not args.machine:
        print(get_message("debug_mode_enabled"))
    budget = Budget(args.budget)
    try:
        return args.handler(args, report, budget)
    except UsageError as e:
        print(get_message("usage_error", e))
        return EXIT_USAGE
    except ParseError as e:
        print(get_message("parse_error", e))
        return EXIT_USAGE
    except OSError as e:
        print(get_message("file_error", e))
        return EXIT_USAGE
    except ComonoidError as e:
        print(get_message("command_error", type(e).__name__, e))
        if args.debug:
            print(get_message("debug_full_traceback"))
            traceback.print_exc()
        else:
            print(get_message("debug_tip"))
        return EXIT_USAGE
