"""Command-line front end: ``pamr parse|check|score|stats|iaa``."""
import argparse
import logging
import sys
from dataclasses import replace
from typing import Dict, List, Optional, Sequence, TextIO

from .amr.graph import triples
from .amr.penman import SerializeStyle
from .config import settings
from .corpus.analysis import iaa, stats
from .corpus.reader import AnnotatedSentence, format_record, read_corpus
from .diagnostics import Severity
from .errors import CorpusError, PamrError
from .guideline.lexicon import load_lexicon
from .guideline.validator import RuleConfig, validate
from .scoring.smatch import MatchMode, SmatchConfig, score_corpus
from .utils.helpers import STDIN, annotator_names, format_score, read_text, split_list_args, to_json

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FINDINGS = 1
EXIT_USAGE = 2
EXIT_IO = 3


def _load(path: str, require_wellformed: bool = True) -> List[AnnotatedSentence]:
    sentences = read_corpus(read_text(path), source=path, require_ids=False,
                            require_wellformed=require_wellformed)
    if not sentences:
        raise CorpusError("no records found", path)
    logger.info(f"Read {len(sentences)} record(s) from {path}")
    return sentences


def _smatch_config(args: argparse.Namespace) -> SmatchConfig:
    defaults = settings.get_default_settings()
    return SmatchConfig(
        restarts=args.restarts if args.restarts is not None else defaults["restarts"],
        seed=args.seed if args.seed is not None else defaults["seed"],
        include_top=defaults["include_top"] and not args.no_top,
        mode=MatchMode.UNLABELED if args.unlabeled else MatchMode.LABELED,
        exact_threshold=defaults["exact_threshold"],
    )


def cmd_parse(args: argparse.Namespace, out: TextIO) -> int:
    """Re-serialize every record, or list its triples with ``--format json``."""
    sentences = _load(args.file)
    indent = settings.get_default_settings()["indent"]
    style = SerializeStyle(canonical_vars=args.canonical, indent=indent)
    if args.format == "json":
        records = [
            {"id": s.id, "triples": [t.to_dict() for t in triples(s.graph)]}
            for s in sentences
        ]
        out.write(to_json({"records": records}) + "\n")
    else:
        out.write("\n\n".join(format_record(s, style) for s in sentences) + "\n")
    return EXIT_OK


def _rule_config(args: argparse.Namespace) -> RuleConfig:
    rules = split_list_args(args.rules) or settings.get_default_rules()
    severities = settings.get_severity_overrides() + split_list_args(args.severity)
    try:
        return RuleConfig.from_strings(rules or None, severities)
    except ValueError as e:
        raise PamrError(f"invalid rule configuration: {e}") from e


def cmd_check(args: argparse.Namespace, out: TextIO) -> int:
    """Validate every record and print one line per diagnostic plus a summary."""
    rule_config = _rule_config(args)
    lexicon = load_lexicon(args.lexicon or settings.get_lexicon_path())
    sentences = _load(args.file, require_wellformed=False)

    counts: Dict[Severity, int] = {severity: 0 for severity in Severity}
    records = []
    for sentence in sentences:
        diagnostics = validate(sentence.graph, lexicon, rule_config, sentence.clitic_vars)
        for d in diagnostics:
            counts[d.severity] += 1
        records.append((sentence.id, diagnostics))

    if args.format == "json":
        out.write(to_json({
            "records": [
                {"id": record_id, "diagnostics": [d.to_dict() for d in diagnostics]}
                for record_id, diagnostics in records
            ],
            "errors": counts[Severity.ERROR],
            "warnings": counts[Severity.WARNING],
            "infos": counts[Severity.INFO],
        }) + "\n")
    else:
        for record_id, diagnostics in records:
            for d in diagnostics:
                out.write(f"{record_id}\t{d.rule.value}\t{d.severity.value}\t{d.variable}\t{d.message}\n")
        out.write(f"{counts[Severity.ERROR]} errors, {counts[Severity.WARNING]} warnings\n")

    if counts[Severity.ERROR] or (args.strict and counts[Severity.WARNING]):
        return EXIT_FINDINGS
    return EXIT_OK


def cmd_score(args: argparse.Namespace, out: TextIO) -> int:
    """Smatch between two files, paired by record id."""
    candidate = _load(args.file_a)
    reference = {s.id: s for s in _load(args.file_b)}
    candidate_ids = [s.id for s in candidate]
    only_a = [i for i in candidate_ids if i not in reference]
    only_b = [i for i in reference if i not in set(candidate_ids)]
    if only_a or only_b:
        parts = []
        if only_a:
            parts.append(f"only in {args.file_a}: {', '.join(only_a)}")
        if only_b:
            parts.append(f"only in {args.file_b}: {', '.join(only_b)}")
        raise CorpusError(f"record ids do not align ({'; '.join(parts)})")

    cfg = _smatch_config(args)
    result = score_corpus([(s.graph, reference[s.id].graph) for s in candidate], cfg)
    if args.format == "json":
        out.write(to_json({
            "mode": cfg.mode.value,
            "micro": result.micro.to_dict(),
            "pairs": [{"id": i, **r.to_dict()} for i, r in zip(candidate_ids, result.pairs)],
        }) + "\n")
        return EXIT_OK

    for record_id, report in zip(candidate_ids, result.pairs):
        out.write(f"{record_id}\t{report.matched}\t{report.total_a}\t{report.total_b}\t"
                  f"{format_score(report.f1)}\n")
    micro = result.micro
    out.write(f"mode: {cfg.mode.value}\n")
    out.write(f"precision: {format_score(micro.precision)}\n")
    out.write(f"recall: {format_score(micro.recall)}\n")
    out.write(f"f1: {format_score(micro.f1)}\n")
    return EXIT_OK


def cmd_stats(args: argparse.Namespace, out: TextIO) -> int:
    """Corpus statistics with concept and role frequency tables."""
    result = stats(_load(args.file))
    if args.format == "json":
        out.write(to_json(result.to_dict()) + "\n")
        return EXIT_OK

    out.write(f"sentences: {result.sentence_count}\n")
    out.write(f"reentrancies: {result.reentrancy_count}\n")
    out.write(f"mean_triples: {format_score(result.mean_triples)}\n")
    out.write(f"median_triples: {format_score(result.median_triples)}\n")
    out.write(f"lvc_concepts: {result.lvc_concept_count}\n")
    out.write("\nconcepts:\n")
    out.write(result.concepts.head(args.top).to_string() + "\n")
    if len(result.roles):
        out.write("\nroles:\n")
        out.write(result.roles.head(args.top).to_string() + "\n")
    return EXIT_OK


def cmd_iaa(args: argparse.Namespace, out: TextIO) -> int:
    """Pairwise and average agreement between annotator files."""
    if len(args.files) < 2:
        raise PamrError("iaa needs at least two annotator files")
    if args.files.count(STDIN) > 1:
        raise PamrError("standard input can be used for one file only")
    loaded = [_load(path) for path in args.files]
    names = annotator_names(args.files, [[s.annotator or "" for s in c] for c in loaded])
    corpora = dict(zip(names, loaded))

    cfg = _smatch_config(args)
    if args.both:
        modes = [MatchMode.LABELED, MatchMode.UNLABELED]
    else:
        modes = [cfg.mode]
    reports = [iaa(corpora, replace(cfg, mode=mode)) for mode in modes]

    if args.format == "json":
        payload = [r.to_dict() for r in reports]
        out.write(to_json(payload if args.both else payload[0]) + "\n")
        return EXIT_OK

    for index, report in enumerate(reports):
        if index:
            out.write("\n")
        out.write(f"mode: {report.mode.value}\n")
        out.write(f"annotators: {', '.join(report.annotators)}\n")
        out.write(f"shared_ids: {len(report.shared_ids)}\n")
        frame = report.to_frame()[["annotator_a", "annotator_b", "precision", "recall", "f1"]]
        out.write(frame.to_string(index=False, float_format=format_score) + "\n")
        out.write(f"average_f1: {format_score(report.average_f1)}\n")
    return EXIT_OK


def _add_format(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=("text", "json"), default="text",
                        help="output format (default: text)")


def _add_smatch_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--unlabeled", action="store_true", help="ignore relation and attribute roles")
    parser.add_argument("--restarts", type=int, default=None, help="hill-climbing restarts (default: 8)")
    parser.add_argument("--seed", type=int, default=None, help="seed for random restarts (default: 0)")
    parser.add_argument("--no-top", action="store_true", help="do not count the TOP triple")


def build_parser() -> argparse.ArgumentParser:
    """Create the argument parser with one subcommand per operation."""
    parser = argparse.ArgumentParser(
        prog="pamr",
        description="Persian AMR toolkit: parse, validate, score and analyze PENMAN corpora.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {settings.get_version()}")
    parser.add_argument("--log-level", choices=settings.LOG_LEVELS, type=str.upper, default=None,
                        help="logging level (default: PAMR_LOG_LEVEL or WARNING)")
    parser.add_argument("-v", "--verbose", action="store_true", help="shorthand for --log-level INFO")
    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND")
    subparsers.required = True

    parse = subparsers.add_parser("parse", help="parse and re-serialize graphs")
    parse.add_argument("file", help="corpus or PENMAN file, - for stdin")
    parse.add_argument("--canonical", action="store_true", help="rename variables canonically")
    _add_format(parse)
    parse.set_defaults(func=cmd_parse)

    check = subparsers.add_parser("check", help="validate graphs against the annotation rules")
    check.add_argument("file", help="corpus or PENMAN file, - for stdin")
    check.add_argument("--lexicon", default=None, help="lexicon file (default: PAMR_LEXICON or builtin)")
    check.add_argument("--rules", action="append", default=[],
                       help="comma-separated rule ids to run (default: PAMR_RULES or all)")
    check.add_argument("--severity", action="append", default=[],
                       help="override a rule severity, e.g. R3=error (repeatable)")
    check.add_argument("--strict", action="store_true", help="exit 1 on warnings as well")
    _add_format(check)
    check.set_defaults(func=cmd_check)

    score = subparsers.add_parser("score", help="Smatch between two files paired by id")
    score.add_argument("file_a", help="candidate file")
    score.add_argument("file_b", help="reference file")
    _add_smatch_options(score)
    _add_format(score)
    score.set_defaults(func=cmd_score)

    stats_parser = subparsers.add_parser("stats", help="corpus statistics")
    stats_parser.add_argument("file", help="corpus file, - for stdin")
    stats_parser.add_argument("--top", type=int, default=20, help="rows per frequency table (default: 20)")
    _add_format(stats_parser)
    stats_parser.set_defaults(func=cmd_stats)

    agreement = subparsers.add_parser("iaa", help="inter-annotator agreement")
    agreement.add_argument("files", nargs="+", help="one corpus file per annotator")
    agreement.add_argument("--both", action="store_true", help="report labeled and unlabeled agreement")
    _add_smatch_options(agreement)
    _add_format(agreement)
    agreement.set_defaults(func=cmd_iaa)

    return parser


def resolve_log_level(args: argparse.Namespace) -> str:
    if args.log_level:
        return args.log_level
    if args.verbose:
        return "INFO"
    return settings.get_log_level()


def run(args: argparse.Namespace, out: Optional[TextIO] = None) -> int:
    """Dispatch a parsed command line and map failures to exit codes."""
    out = out or sys.stdout
    if getattr(args, "file_a", None) == STDIN and getattr(args, "file_b", None) == STDIN:
        logger.error("standard input can be used for one file only")
        return EXIT_USAGE
    try:
        return args.func(args, out)
    except PamrError as e:
        logger.error(str(e))
        return EXIT_USAGE
    except OSError as e:
        logger.error(f"I/O error: {e}")
        return EXIT_IO


def parse_args(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    return build_parser().parse_args(argv)
