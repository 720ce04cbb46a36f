"""Command-line interface.

Exit codes: 0 success, 1 usage or configuration error, 2 data error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import xml.etree.ElementTree as ET

import yaml

from . import __version__, pipeline
from .corpus_io import ParseError
from .pipeline import ConfigError, RunConfig

EXIT_USAGE = 1
EXIT_DATA = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _overrides(pairs: list[str]) -> dict:
    out = {}
    for item in pairs:
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
        out[key.strip().replace("-", "_")] = yaml.safe_load(value)
    return out


def _config(args) -> RunConfig:
    overrides = _overrides(args.set or [])
    if args.output_dir:
        overrides["output_dir"] = args.output_dir
    if args.config:
        return RunConfig.load(args.config, overrides)
    known = {f for f in RunConfig.__dataclass_fields__}
    bad = set(overrides) - known
    if bad:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(bad))}")
    return RunConfig(**overrides)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-c", "--config", help="YAML/JSON run configuration")
    common.add_argument("--set", action="append", metavar="KEY=VALUE",
                        help="override a config key (value parsed as YAML); repeatable")
    common.add_argument("-o", "--output-dir", help="output directory (overrides config)")
    common.add_argument("-v", "--verbose", action="store_true")

    p = _Parser(prog="atrules", description="Infer and apply shallow-transfer rules from alignment templates.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    f = sub.add_parser("fixture", help="write a synthetic corpus, dictionary and config")
    f.add_argument("directory")
    f.add_argument("--size", type=int, default=2000)
    f.add_argument("--dev-size", type=int, default=300)
    f.add_argument("--test-size", type=int, default=500)
    f.add_argument("--seed", type=int, default=0)
    f.add_argument("--oov-rate", type=float, default=0.0)
    f.add_argument("-v", "--verbose", action="store_true")

    sub.add_parser("align", parents=[common], help="IBM Model 1 both ways + symmetrization (or import)")
    sub.add_parser("extract", parents=[common], help="extract bilingual phrase pairs")
    sub.add_parser("learn", parents=[common], help="generalize phrases into counted templates")
    sub.add_parser("genrules", parents=[common], help="select templates and write rule file(s)")
    t = sub.add_parser("translate", parents=[common], help="apply a rule base to an analyzed corpus")
    t.add_argument("-i", "--input", help="analyzed SL corpus (default: test_source)")
    t.add_argument("--output", help="output file (default: <output_dir>/translation.txt)")
    e = sub.add_parser("evaluate", parents=[common], help="TER/BLEU with bootstrap intervals")
    e.add_argument("--hyp", help="hypothesis file (default: <output_dir>/translation.txt)")
    e.add_argument("--ref", help="reference file (default: test_target)")
    sub.add_parser("sweep", parents=[common], help="pick the threshold with the lowest dev TER")
    sub.add_parser("run", parents=[common], help="align, extract, learn, sweep/genrules, translate, evaluate")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "fixture":
            path = pipeline.cmd_fixture(args.directory, args.size, args.dev_size, args.test_size,
                                        args.seed, args.oov_rate)
            print(path)
            return 0
        cfg = _config(args)
        if args.command == "align":
            print(pipeline.cmd_align(cfg))
        elif args.command == "extract":
            print(pipeline.cmd_extract(cfg))
        elif args.command == "learn":
            print(pipeline.cmd_learn(cfg))
        elif args.command == "genrules":
            for path in pipeline.cmd_genrules(cfg):
                print(path)
        elif args.command == "translate":
            print(pipeline.cmd_translate(cfg, args.input, args.output))
        elif args.command == "evaluate":
            report = pipeline.cmd_evaluate(cfg, args.hyp, args.ref)
            sys.stdout.write(pipeline.report_evaluation(report))
        elif args.command == "sweep":
            result = pipeline.cmd_sweep(cfg)
            print(json.dumps({"best_threshold": result["best_threshold"]}))
        elif args.command == "run":
            report = pipeline.cmd_run(cfg)
            if report:
                sys.stdout.write(pipeline.report_evaluation(report))
    except ConfigError as exc:
        print(f"atrules: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, ValueError, OSError, ET.ParseError) as exc:
        print(f"atrules: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    return 0


if __name__ == "__main__":
    sys.exit(main())
