"""CLI entry point for the log-gamma polymer tools."""

from __future__ import annotations

import argparse
import logging
import sys
import textwrap
from collections.abc import Callable, Iterable
from importlib.metadata import PackageNotFoundError, version

from .errors import PolymerError


def get_version() -> str:
    """Get package version."""
    try:
        return version("loggamma-polymer")
    except PackageNotFoundError:
        return "dev"


from .commands import (  # noqa: E402
    handle_compute_asymptotic_c,
    handle_compute_char_dir,
    handle_compute_cramer,
    handle_compute_decomposition,
    handle_compute_free_energy,
    handle_compute_free_energy_line,
    handle_compute_infconv,
    handle_compute_kappa,
    handle_compute_lmgf,
    handle_compute_lmgf_dual,
    handle_compute_lmgf_hor,
    handle_compute_lmgf_stationary,
    handle_compute_lmgf_ver,
    handle_compute_p_hor,
    handle_compute_r_s,
    handle_compute_rate,
    handle_compute_rate_line,
    handle_compute_rate_origin,
    handle_compute_specfun,
    handle_compute_stationary,
    handle_compute_trans,
    handle_compute_vbar,
    handle_simulate_env_dump,
    handle_simulate_logz,
    handle_simulate_logz_ddim,
    handle_simulate_logz_line,
    handle_simulate_lmgf,
    handle_simulate_path,
    handle_simulate_plan,
    handle_simulate_right_tail,
    handle_verify_burke,
    handle_verify_decomp_identity,
    handle_verify_duality,
    handle_verify_epsilon_fit,
    handle_verify_lln,
    handle_verify_mean_identity,
    handle_verify_transitions,
    handle_verify_variance_scan,
)
from .commands.compute import SPECIAL_FUNCTIONS  # noqa: E402


class CompactOptionalFormatter(argparse.RawTextHelpFormatter):
    """Formatter that groups optional flags before their metavar."""

    def __init__(self, prog: str, indent_increment: int = 2, max_help_position: int = 40, width: int | None = None) -> None:
        super().__init__(prog, indent_increment, max_help_position, width)

    def _format_action_invocation(self, action: argparse.Action) -> str:
        if not action.option_strings:
            return super()._format_action_invocation(action)
        opts = ", ".join(action.option_strings)
        if action.nargs != 0:
            opts += f" {self._format_args(action, action.dest.upper())}"
        return opts

    def _format_action(self, action: argparse.Action) -> str:
        if isinstance(action, argparse._SubParsersAction):
            parts = []
            self._indent()
            for subaction in action._get_subactions():
                if not subaction.help:
                    continue
                parts.append(super()._format_action(subaction))
            self._dedent()
            return "".join(parts)
        return super()._format_action(action)


def traverse_to_parser(
    parser: argparse.ArgumentParser,
    tokens: list[str],
) -> tuple[argparse.ArgumentParser, list[str]]:
    """Traverse subparsers to the deepest matching parser."""
    if not parser._subparsers:
        return parser, tokens
    subparsers_action = None
    for action in parser._subparsers._actions:
        if isinstance(action, argparse._SubParsersAction):
            subparsers_action = action
            break
    if not subparsers_action or not tokens:
        return parser, tokens
    command = tokens[0]
    choices = subparsers_action.choices
    if command not in choices:
        return parser, tokens
    return traverse_to_parser(choices[command], tokens[1:])


# Flag definitions shared by every subcommand that takes them
FLAGS: dict[str, dict] = {
    "mu": {"type": float, "help": "Bulk shape mu > 0 (1/Y ~ Gamma(mu))"},
    "theta": {"type": float, "help": "Boundary shape theta in (0, mu)"},
    "s": {"type": float, "help": "First coordinate of the direction (s >= 0)"},
    "t": {"type": float, "help": "Second coordinate of the direction (t >= 0)"},
    "r": {"type": float, "help": "Level r of the right tail"},
    "xi": {"type": float, "help": "Argument xi of an l.m.g.f."},
    "a": {"type": float, "help": "Split point a in [-t, s]"},
    "b": {"type": float, "help": "Second split point b in [-t, s] (default: a)"},
    "c": {"type": float, "help": "Scale of the characteristic direction (default: 1)"},
    "n": {"type": int, "help": "Size n: endpoint (floor(ns), floor(nt))"},
    "m": {"type": int, "help": "Rows of the grid (default: n)"},
    "sizes": {"metavar": "LIST", "help": "Comma-separated sizes, e.g. 64,128,256"},
    "replicas": {"type": int, "help": "Number of replicas"},
    "seed": {"type": int, "help": "Master seed"},
    "seeds": {"metavar": "LIST", "help": "Comma-separated seeds"},
    "workers": {"type": int, "help": "Worker threads across replicas"},
    "plan": {"metavar": "FILE", "help": "Experiment plan (flat key = value file)"},
    "tol": {"type": float, "help": "Pass tolerance"},
    "grid": {"type": int, "help": "Number of grid points"},
    "d": {"type": int, "help": "Lattice dimension (2..4)"},
    "u": {"metavar": "LIST", "help": "Endpoint coordinates, e.g. 1,1,1"},
    "count": {"type": int, "default": 1, "help": "Number of sampled paths (default: 1)"},
    "fn": {"choices": sorted(SPECIAL_FUNCTIONS), "help": "Special function to evaluate"},
    "x": {"type": float, "help": "Argument of the special function"},
}

SWITCHES: dict[str, str] = {
    "stationary": "Use the stationary model (needs --theta)",
    "tail": "Right-tail rate J (0 below the free energy) instead of I",
    "square": "Include the origin weight (Z with every weight of the rectangle)",
    "zero_weights": "Set every weight to 1 (log Z counts paths)",
    "control": "Also report the KS statistic of an i.i.d. grid (diagnostic)",
}


def add_flags(subparser: argparse.ArgumentParser, names: Iterable[str], defaults: dict | None = None) -> None:
    """Add the named value flags and switches to a subparser."""
    defaults = defaults or {}
    for name in names:
        option = f"--{name.replace('_', '-')}"
        if name in SWITCHES:
            subparser.add_argument(option, action="store_true", help=SWITCHES[name])
            continue
        spec = dict(FLAGS[name])
        if name in defaults:
            spec["default"] = defaults[name]
            spec["help"] = f"{spec['help']} (default: {defaults[name]})"
        subparser.add_argument(option, dest=name, **spec)


def add_output_flags(subparser: argparse.ArgumentParser, default_format: str = "json") -> None:
    """Add --format, --out and --verbose to a subparser."""
    subparser.add_argument("--format", choices=["json", "csv"], default=default_format, help=f"Output format (default: {default_format})")
    subparser.add_argument("--out", metavar="FILE", help="Also write the records to FILE")
    subparser.add_argument("--verbose", action="store_true", help="Log solver and progress diagnostics on stderr")


def add_solver_flags(subparser: argparse.ArgumentParser) -> None:
    subparser.add_argument("--root-tol", dest="root_tol", type=float, help="Root-finding tolerance (default: 1e-12)")
    subparser.add_argument("--opt-tol", dest="opt_tol", type=float, help="Optimisation tolerance (default: 1e-10)")
    subparser.add_argument("--max-iter", dest="max_iter", type=int, help="Iteration cap (default: 200)")


# (name, help, flags, handler)
Subcommand = tuple[str, str, tuple[str, ...], Callable[[argparse.Namespace], int]]

COMPUTE: list[Subcommand] = [
    ("free-energy", "Point-to-point free energy p(s,t)", ("mu", "s", "t"), handle_compute_free_energy),
    ("free-energy-line", "Point-to-line free energy p(s/2,s/2)", ("mu", "s"), handle_compute_free_energy_line),
    ("stationary", "Stationary free energy -s Psi0(theta) - t Psi0(mu-theta)", ("mu", "theta", "s", "t"), handle_compute_stationary),
    ("rate", "Right-tail rate function I(r) (or J with --tail)", ("mu", "s", "t", "r", "tail"), handle_compute_rate),
    ("rate-line", "Point-to-line rate I_{s/2,s/2}(r)", ("mu", "s", "r"), handle_compute_rate_line),
    ("rate-origin", "Rate at the origin direction: mu r for r > 0", ("mu", "r"), handle_compute_rate_origin),
    ("cramer", "Cramer rate of a single log-gamma weight", ("mu", "r"), handle_compute_cramer),
    ("lmgf", "l.m.g.f. of the i.i.d. model", ("mu", "s", "t", "xi"), handle_compute_lmgf),
    ("lmgf-dual", "Both dual formulas of the i.i.d. l.m.g.f.", ("mu", "s", "t", "xi"), handle_compute_lmgf_dual),
    ("lmgf-stationary", "l.m.g.f. of the stationary model", ("mu", "theta", "s", "t", "xi"), handle_compute_lmgf_stationary),
    ("lmgf-hor", "l.m.g.f. of the horizontal-exit partition function", ("mu", "theta", "s", "t", "xi"), handle_compute_lmgf_hor),
    ("lmgf-ver", "l.m.g.f. of the vertical-exit partition function", ("mu", "theta", "s", "t", "xi"), handle_compute_lmgf_ver),
    ("p-hor", "Free energy of horizontal-exit paths", ("mu", "theta", "s", "t"), handle_compute_p_hor),
    ("trans", "Transition predicates", ("mu", "theta", "s", "t", "xi"), handle_compute_trans),
    ("char-dir", "Characteristic direction", ("mu", "theta", "c"), handle_compute_char_dir),
    ("r-s", "Boundary rate R_s(r) or its dual R*_s(xi)", ("mu", "theta", "s", "r", "xi"), handle_compute_r_s),
    ("vbar", "Macroscopic exit point for a split a", ("a", "s", "t"), handle_compute_vbar),
    ("kappa", "Boundary-factor rate kappa_a(r)", ("mu", "theta", "s", "t", "a", "r", "xi"), handle_compute_kappa),
    ("infconv", "Infimal convolution H^{a,b}(r)", ("mu", "theta", "s", "t", "a", "b", "r"), handle_compute_infconv),
    ("decomposition", "inf over a of H^a(r) next to R_s(r)", ("mu", "theta", "s", "t", "r"), handle_compute_decomposition),
    ("asymptotic-c", "Constant C of I(p + eps) ~ C eps^{3/2}", ("mu",), handle_compute_asymptotic_c),
    ("specfun", "Evaluate a special function", ("fn", "x"), handle_compute_specfun),
]

_MC_FLAGS = ("plan", "mu", "theta", "s", "t", "sizes", "n", "replicas", "seed", "workers")

SIMULATE: list[Subcommand] = [
    ("logz", "log Z per replica at (floor(ns), floor(nt))",
     ("mu", "theta", "stationary", "s", "t", "n", "replicas", "seed", "workers", "square"), handle_simulate_logz),
    ("logz-line", "Point-to-line log Z per replica",
     ("mu", "theta", "stationary", "n", "replicas", "seed", "workers"), handle_simulate_logz_line),
    ("logz-ddim", "log Z of d-dimensional directed paths",
     ("mu", "d", "u", "replicas", "seed", "workers", "zero_weights"), handle_simulate_logz_ddim),
    ("path", "Sample paths from the quenched polymer measure",
     ("mu", "theta", "stationary", "m", "n", "seed", "count", "zero_weights"), handle_simulate_path),
    ("env-dump", "Write a sampled environment as i,j,logw rows",
     ("mu", "theta", "stationary", "m", "n", "seed"), handle_simulate_env_dump),
    ("lmgf", "Replica estimate of the l.m.g.f. of log Z per size",
     _MC_FLAGS + ("stationary", "xi"), handle_simulate_lmgf),
    ("right-tail", "Empirical right-tail rate of log Z at level r per size",
     _MC_FLAGS + ("r",), handle_simulate_right_tail),
    ("plan", "Run the estimator named by a plan file", _MC_FLAGS + ("stationary", "seeds", "xi", "r"), handle_simulate_plan),
]

SIMULATE_DEFAULTS = {"replicas": 1, "seed": 0, "workers": 1}
# Subcommands whose defaults come from the plan, not from the flags
PLAN_DRIVEN = {"lmgf", "right-tail", "plan"}

VERIFY: list[Subcommand] = [
    ("burke", "KS tests of the ratio weights of the stationary model", _MC_FLAGS + ("seeds", "control"), handle_verify_burke),
    ("mean-identity", "Stationary mean of log Z against its exact value", _MC_FLAGS, handle_verify_mean_identity),
    ("lln", "Law of large numbers and superadditive ordering", _MC_FLAGS + ("stationary", "tol"), handle_verify_lln),
    ("duality", "Legendre dual of J against the l.m.g.f.", ("mu", "s", "t", "grid", "tol"), handle_verify_duality),
    ("decomp-identity", "R_s(r) against inf over a of H^a(r)", ("mu", "theta", "s", "t", "tol"), handle_verify_decomp_identity),
    ("transitions", "trans1 => trans2 and the hor/ver split of the l.m.g.f.", ("mu", "theta", "s", "t", "grid"), handle_verify_transitions),
    ("variance-scan", "Variance exponents on and off the characteristic direction", _MC_FLAGS, handle_verify_variance_scan),
    ("epsilon-fit", "eps^{3/2} behaviour of I(p + eps)", ("mu",), handle_verify_epsilon_fit),
]

VERIFY_DEFAULTS = {
    "duality": {"grid": 10},
    "transitions": {"grid": 30},
}

COMMANDS = {
    "compute": ("Closed forms and variational quantities", COMPUTE),
    "simulate": ("Sampled environments and exact partition functions", SIMULATE),
    "verify": ("Identity checks and Monte Carlo acceptance tests (exit 1 on failure)", VERIFY),
}

EXAMPLES = {
    "compute": "loggamma compute free-energy --mu 2 --s 1 --t 1",
    "simulate": "loggamma simulate logz --mu 2 --n 8 --replicas 3 --seed 7",
    "verify": "loggamma verify duality --mu 2 --s 1 --t 1",
}


def _completion_words(entries: list[Subcommand]) -> str:
    return " ".join(name for name, *_ in entries)


BASH_COMPLETION = f'''
_loggamma_completion() {{
    local cur subcommands
    COMPREPLY=()
    cur="${{COMP_WORDS[COMP_CWORD]}}"

    case "${{COMP_WORDS[1]}}" in
        compute)
            subcommands="{_completion_words(COMPUTE)}"
            ;;
        simulate)
            subcommands="{_completion_words(SIMULATE)}"
            ;;
        verify)
            subcommands="{_completion_words(VERIFY)}"
            ;;
        *)
            subcommands=""
            ;;
    esac

    if [[ ${{COMP_CWORD}} -eq 1 ]]; then
        COMPREPLY=( $(compgen -W "compute simulate verify" -- ${{cur}}) )
    elif [[ ${{COMP_CWORD}} -eq 2 && -n "${{subcommands}}" ]]; then
        COMPREPLY=( $(compgen -W "${{subcommands}}" -- ${{cur}}) )
    elif [[ ${{cur}} == -* ]]; then
        local opts="--mu --theta --s --t --r --xi --n --replicas --seed --format --out --verbose"
        COMPREPLY=( $(compgen -W "${{opts}}" -- ${{cur}}) )
    fi
}}
complete -F _loggamma_completion loggamma
'''

ZSH_COMPLETION = f'''
#compdef loggamma

_loggamma() {{
    local -a commands
    commands=(
        'compute:{COMMANDS["compute"][0]}'
        'simulate:{COMMANDS["simulate"][0]}'
        'verify:{COMMANDS["verify"][0]}'
    )

    _arguments -C \\
        '1: :->command' \\
        '*: :->args'

    case $state in
        command)
            _describe 'command' commands
            ;;
        args)
            case $words[2] in
                compute)
                    _values 'subcommand' {_completion_words(COMPUTE)}
                    ;;
                simulate)
                    _values 'subcommand' {_completion_words(SIMULATE)}
                    ;;
                verify)
                    _values 'subcommand' {_completion_words(VERIFY)}
                    ;;
            esac
            ;;
    esac
}}

_loggamma "$@"
'''


def print_completion(shell: str) -> int:
    """Print shell completion script and exit."""
    if shell == "bash":
        print(BASH_COMPLETION.strip())
    elif shell == "zsh":
        print(ZSH_COMPLETION.strip())
    else:
        print(f"Unknown shell: {shell}. Use 'bash' or 'zsh'.", file=sys.stderr)
        return 2
    return 0


def build_parser() -> argparse.ArgumentParser:
    """Build the main argument parser with all subcommands."""
    parser = argparse.ArgumentParser(
        prog="loggamma",
        description="Free energies, large-deviation rates and exact simulations of the log-gamma polymer",
        usage="\n    loggamma command subcommand [parameters]",
        add_help=False,
        formatter_class=CompactOptionalFormatter,
        epilog=textwrap.dedent("""\
            Examples:
                loggamma compute free-energy --mu 2 --s 1 --t 1        Free energy on the diagonal
                loggamma compute rate --mu 2 --s 1 --t 1 --r 1.5       Right-tail rate function
                loggamma simulate logz --mu 2 --n 64 --replicas 10     log Z of ten sampled grids
                loggamma verify mean-identity --mu 2 --theta 1 --n 32  Stationary mean identity
                loggamma verify help                                   Get help for verify
        """),
    )
    parser._positionals.title = "Available commands"
    subparsers = parser.add_subparsers(dest="command")

    for command, (description, entries) in COMMANDS.items():
        command_parser = subparsers.add_parser(
            command,
            help=description,
            usage=f"\n  loggamma {command} <subcommand> [parameters]",
            formatter_class=CompactOptionalFormatter,
            add_help=False,
        )
        command_parser._positionals.title = "Available subcommands"
        command_subparsers = command_parser.add_subparsers(dest=f"{command}_command")
        for name, help_text, flags, handler in entries:
            sub = command_subparsers.add_parser(
                name,
                help=help_text,
                usage=f"\n  loggamma {command} {name} [parameters]",
                formatter_class=CompactOptionalFormatter,
                add_help=False,
            )
            sub._optionals.title = "parameters"
            if command == "simulate" and name not in PLAN_DRIVEN:
                defaults = SIMULATE_DEFAULTS
            else:
                defaults = VERIFY_DEFAULTS.get(name, {})
            add_flags(sub, flags, defaults)
            if command == "compute" or name in ("duality", "decomp-identity", "transitions", "epsilon-fit"):
                add_solver_flags(sub)
            add_output_flags(sub, "csv" if name == "env-dump" else "json")
            sub.set_defaults(func=handler)

    return parser


def configure_logging(verbose: bool) -> None:
    """Diagnostics go to stderr: WARNING by default, DEBUG with --verbose."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
        force=True,
    )


def main(argv: Iterable[str] | None = None) -> int:
    """Main CLI entry point."""
    tokens = list(argv) if argv is not None else sys.argv[1:]

    # Handle --version before parsing
    if tokens and tokens[0] in ("--version", "-V"):
        print(f"loggamma {get_version()}")
        return 0

    # Handle --completion before parsing
    if len(tokens) >= 2 and tokens[0] == "--completion":
        return print_completion(tokens[1])
    if len(tokens) == 1 and tokens[0] == "--completion":
        print("Usage: loggamma --completion [bash|zsh]", file=sys.stderr)
        return 2

    parser = build_parser()

    if not tokens or tokens[-1] in ("help", "--help", "-h"):
        target_parser, remaining = traverse_to_parser(parser, tokens[:-1])
        if remaining:
            print(f"error: unknown command {' '.join(remaining)}", file=sys.stderr)
            return 2
        print()
        target_parser.print_help()
        print()
        return 0

    try:
        args = parser.parse_args(tokens)
    except SystemExit as exc:
        return int(exc.code or 0)

    if _require_subcommand(args):
        return 2

    configure_logging(getattr(args, "verbose", False))
    try:
        return args.func(args)
    except PolymerError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


def _require_subcommand(args: argparse.Namespace) -> bool:
    """Return True (after printing usage) if the command or subcommand is missing."""
    if args.command is None:
        print(
            "\nloggamma: [ERROR]: the following arguments are required: <command>\n\n"
            "Usage: loggamma <command> <subcommand> [parameters]\n\n"
            "To see help text, you can run:\n"
            "  loggamma help\n"
            "  loggamma <command> help\n"
            "  loggamma <command> <subcommand> help\n",
            file=sys.stderr,
        )
        return True
    if getattr(args, f"{args.command}_command", None) is None:
        print(
            f"\nloggamma {args.command}: [ERROR]: the following arguments are required: <subcommand>\n\n"
            f"Usage: loggamma {args.command} <subcommand> [parameters]\n\n"
            f"Example: {EXAMPLES[args.command]}\n\n"
            "To see help text, you can run:\n"
            f"  loggamma {args.command} help\n"
            f"  loggamma {args.command} <subcommand> help\n",
            file=sys.stderr,
        )
        return True
    return False


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
