"""Corpus, file format, cross-verification, rendering and the CLI."""
from .corpus import CorpusError, CorpusProblem, CorpusResult, load_corpus, load_problem, run_corpus, run_problem
from .fileformat import FormatError, ProblemFile, format_system, parse_problem_file, parse_recipe, parse_system
from .methods import LSQ_METHODS, SOLVE_METHODS, Outcome, lsq_with, solve_with
from .render import render_tableau
from .verify import CONSISTENT_FAILURE, VerificationReport, verify_all


def cli_main(argv=None) -> int:
    from .cli import main
    return main(argv)


__all__ = [
    "CorpusError", "CorpusProblem", "CorpusResult", "load_corpus", "load_problem", "run_corpus", "run_problem",
    "FormatError", "ProblemFile", "format_system", "parse_problem_file", "parse_recipe", "parse_system",
    "LSQ_METHODS", "SOLVE_METHODS", "Outcome", "lsq_with", "solve_with",
    "render_tableau", "CONSISTENT_FAILURE", "VerificationReport", "verify_all", "cli_main",
]
