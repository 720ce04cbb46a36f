"""Run configuration and the pipeline steps behind the CLI subcommands.

Every step reads its inputs from the config and the run's output directory
and writes fixed file names there, so ``align``, ``extract``, ``learn``,
``genrules``, ``translate`` and ``evaluate`` can be run one at a time or all
at once with ``run``.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import logging
import os
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from . import __version__
from .aligner import (SYMMETRIZATION_METHODS, align_corpus, export_alignments, import_alignments)
from .bidix import format_dictionary, load_dictionary
from .corpus_io import (HEADER_PREFIX, AnalyzedSentence, format_analyzed_line, load_corpus, load_parallel,
                        parse_analyzed_line, read_lines, write_corpus)
from .engine import translate_corpus
from .fixture import LEXICALIZED, dictionary_entries, generate
from .metrics import BLEU, TER, bootstrap_ci
from .phrases import extract_phrases, parse_phrase_dump
from .report import dumps, report_discards, report_rulebase, report_statistics, report_trace, rulebase_data
from .rulegen import RuleBase, build_rules, load_rules, serialize_rules
from .templates import SELECTION_MODES, learn_templates, parse_counted, select_templates, serialize_counted

log = logging.getLogger(__name__)

ALIGNMENTS = "alignments.txt"
PHRASES = "phrases.txt"
TEMPLATES = "templates.txt"
DISCARDS = "discards"
RULES = "rules.txt"
TRANSLATION = "translation.txt"
STATS = "stats"
TRACE = "trace.txt"
EVALUATION = "evaluation"
SWEEP = "sweep"

PATH_KEYS = ("source", "target", "dictionary", "alignments", "dev_source", "dev_target",
             "test_source", "test_target", "rules", "output_dir")


class ConfigError(ValueError):
    """Bad configuration or command-line usage."""


@dataclass
class RunConfig:
    source: str | None = None
    target: str | None = None
    dictionary: str | None = None
    lexicalized: list[str] = field(default_factory=list)
    alignments: str | None = None
    max_source_len: int = 7
    em_iterations: int = 5
    symmetrization: str = "refined"
    selection_mode: str = "raw"
    threshold: float = 5
    thresholds: list[float] | None = None
    dev_source: str | None = None
    dev_target: str | None = None
    test_source: str | None = None
    test_target: str | None = None
    rules: str | None = None
    metric: str = "both"
    resamples: int = 1000
    q: float = 2.5
    seed: int = 0
    token_mode: str = "plain"
    trace: bool = False
    workers: int = 1
    output_dir: str = "out"

    def __post_init__(self):
        if self.symmetrization not in SYMMETRIZATION_METHODS:
            raise ConfigError(f"symmetrization must be one of {SYMMETRIZATION_METHODS}")
        if self.selection_mode not in SELECTION_MODES:
            raise ConfigError(f"selection_mode must be one of {SELECTION_MODES}")
        if self.thresholds is not None and not self.thresholds:
            raise ConfigError("threshold sweep is empty")
        if self.max_source_len < 1 or self.em_iterations < 0 or self.resamples < 1:
            raise ConfigError("max_source_len, em_iterations and resamples must be positive")
        if self.metric not in ("ter", "bleu", "both"):
            raise ConfigError("metric must be 'ter', 'bleu' or 'both'")
        if self.token_mode not in ("plain", "lexical"):
            raise ConfigError("token_mode must be 'plain' or 'lexical'")

    @classmethod
    def from_dict(cls, data: dict, base_dir: str | os.PathLike | None = None) -> "RunConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
        data = dict(data)
        if base_dir is not None:
            for key in PATH_KEYS:
                if data.get(key) is not None:
                    data[key] = str(Path(base_dir) / data[key])
        try:
            return cls(**data)
        except TypeError as exc:
            raise ConfigError(str(exc)) from None

    @classmethod
    def load(cls, path: str | os.PathLike, overrides: dict | None = None) -> "RunConfig":
        with open(path, encoding="utf-8") as fh:
            data = yaml.safe_load(fh) or {}
        if not isinstance(data, dict):
            raise ConfigError(f"{path}: config must be a mapping")
        cfg = cls.from_dict(data, Path(path).parent)
        return cfg.replace(**(overrides or {}))

    def replace(self, **changes) -> "RunConfig":
        try:
            return dataclasses.replace(self, **changes)
        except TypeError as exc:
            raise ConfigError(str(exc)) from None

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def config_hash(self) -> str:
        """Hash of everything that affects results (not where they go)."""
        data = self.to_dict()
        data.pop("output_dir")
        blob = json.dumps(data, sort_keys=True, default=str)
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()[:12]

    def header(self, kind: str) -> str:
        return f"{HEADER_PREFIX} {kind} version={__version__} config={self.config_hash()}"

    def out(self, name: str) -> Path:
        return Path(self.output_dir) / name

    def require(self, *keys: str) -> None:
        missing = [k for k in keys if getattr(self, k) in (None, "", [])]
        if missing:
            raise ConfigError(f"missing config value(s): {', '.join(missing)}")
        for k in keys:
            if k in PATH_KEYS and k != "output_dir" and not Path(getattr(self, k)).exists():
                raise FileNotFoundError(f"{k}: {getattr(self, k)} does not exist")


def _write(path: Path, text: str) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    return path


def _read(path: Path) -> str:
    if not path.exists():
        raise FileNotFoundError(f"{path} not found (run the previous step first)")
    return path.read_text(encoding="utf-8")


def _body(text: str) -> str:
    """Drop leading ``#atrules`` header lines."""
    lines = text.split("\n")
    k = 0
    while k < len(lines) and lines[k].startswith(HEADER_PREFIX):
        k += 1
    return "\n".join(lines[k:])


def _training_pairs(cfg: RunConfig):
    cfg.require("source", "target")
    return load_parallel(cfg.source, cfg.target)


def _dictionary(cfg: RunConfig):
    cfg.require("dictionary")
    return load_dictionary(cfg.dictionary)


def cmd_align(cfg: RunConfig) -> Path:
    pairs = _training_pairs(cfg)
    if cfg.alignments:
        cfg.require("alignments")
        alignments = import_alignments(Path(cfg.alignments).read_text(encoding="utf-8"), pairs)
        log.info("imported %d alignments from %s", len(alignments), cfg.alignments)
    else:
        alignments = align_corpus(pairs, cfg.em_iterations, cfg.symmetrization)
        log.info("aligned %d sentence pairs (%s)", len(alignments), cfg.symmetrization)
    return _write(cfg.out(ALIGNMENTS), cfg.header("alignments") + "\n" + export_alignments(alignments))


def cmd_extract(cfg: RunConfig) -> Path:
    pairs = _training_pairs(cfg)
    alignments = import_alignments(_read(cfg.out(ALIGNMENTS)), pairs)
    lines = [cfg.header("phrases")]
    n = 0
    for pair, a in zip(pairs, alignments):
        found = extract_phrases(pair, a, cfg.max_source_len)
        n += len(found)
        lines.extend(p.dump() for p in found)
    log.info("extracted %d phrase pairs", n)
    return _write(cfg.out(PHRASES), "\n".join(lines) + "\n")


def cmd_learn(cfg: RunConfig) -> Path:
    dictionary = _dictionary(cfg)
    phrases = parse_phrase_dump(_body(_read(cfg.out(PHRASES))))
    counted, tally = learn_templates(phrases, set(cfg.lexicalized), dictionary)
    _write(cfg.out(DISCARDS + ".json"), dumps(tally))
    _write(cfg.out(DISCARDS + ".txt"), report_discards(tally))
    log.info("%d distinct templates from %d phrases", len(counted), tally["total"])
    return _write(cfg.out(TEMPLATES), cfg.header("templates") + "\n" + serialize_counted(counted))


def _threshold_name(th: float) -> str:
    return f"rules-t{th:g}.txt"


def _rulebase(cfg: RunConfig, counted, threshold: float) -> RuleBase:
    selected = select_templates(counted, threshold, cfg.selection_mode)
    meta = {
        "config": cfg.config_hash(),
        "version": __version__,
        "threshold": f"{threshold:g}",
        "selection": cfg.selection_mode,
    }
    return RuleBase(build_rules(selected), frozenset(cfg.lexicalized), meta)


def _write_rulebase(path: Path, rb: RuleBase) -> Path:
    _write(path, serialize_rules(rb))
    stem = path.with_suffix("")
    _write(Path(f"{stem}.report.txt"), report_rulebase(rb))
    _write(Path(f"{stem}.json"), dumps(rulebase_data(rb)))
    return path


def cmd_genrules(cfg: RunConfig) -> list[Path]:
    counted = parse_counted(_body(_read(cfg.out(TEMPLATES))))
    if cfg.thresholds:
        return [_write_rulebase(cfg.out(_threshold_name(th)), _rulebase(cfg, counted, th)) for th in cfg.thresholds]
    return [_write_rulebase(cfg.out(RULES), _rulebase(cfg, counted, cfg.threshold))]


def _load_rulebase(cfg: RunConfig) -> RuleBase:
    path = Path(cfg.rules) if cfg.rules else cfg.out(RULES)
    if not path.exists():
        raise FileNotFoundError(f"{path} not found (run genrules or sweep first)")
    return load_rules(path)


def cmd_translate(cfg: RunConfig, input_path=None, output_path=None) -> Path:
    dictionary = _dictionary(cfg)
    rb = _load_rulebase(cfg)
    if input_path is None:
        cfg.require("test_source")
        input_path = cfg.test_source
    corpus = load_corpus(input_path)
    out, stats, traces = translate_corpus(rb, corpus, dictionary, cfg.workers, with_trace=True)
    output_path = Path(output_path) if output_path else cfg.out(TRANSLATION)
    output_path.parent.mkdir(parents=True, exist_ok=True)
    write_corpus(output_path, out, [cfg.header("translation")])
    data = stats.to_dict()
    _write(cfg.out(STATS + ".json"), dumps(data))
    _write(cfg.out(STATS + ".txt"), report_statistics(data))
    if cfg.trace:
        _write(cfg.out(TRACE), "\n".join(report_trace(s.tokens, t) for s, t in zip(corpus, traces)))
    return output_path


def tokenize_lines(lines: list[str], mode: str = "plain") -> list[list[str]]:
    if mode == "lexical":
        return [[t.render() for t in parse_analyzed_line(line)] for line in lines]
    return [line.split() for line in lines]


def evaluate(hyp_lines: list[str], ref_lines: list[str], cfg: RunConfig) -> dict:
    if len(hyp_lines) != len(ref_lines):
        raise ValueError(f"hypothesis has {len(hyp_lines)} lines but reference has {len(ref_lines)}")
    hyp = tokenize_lines(hyp_lines, cfg.token_mode)
    ref = tokenize_lines(ref_lines, cfg.token_mode)
    report = {"sentences": len(hyp), "resamples": cfg.resamples, "q": cfg.q, "seed": cfg.seed,
              "token_mode": cfg.token_mode}
    scorers = {"ter": (TER,), "bleu": (BLEU,), "both": (TER, BLEU)}[cfg.metric]
    for scorer in scorers:
        point = scorer(hyp, ref)
        ci = bootstrap_ci(scorer, hyp, ref, cfg.resamples, cfg.q, cfg.seed)
        report[scorer.name] = {"score": point.value, "lower": ci.lower, "upper": ci.upper, "level": ci.level}
    return report


def report_evaluation(report: dict) -> str:
    lines = [f"sentences {report['sentences']}  resamples {report['resamples']}  q {report['q']}  seed {report['seed']}"]
    for name in ("TER", "BLEU"):
        if name not in report:
            continue
        r = report[name]
        lines.append(f"{name:<5} {r['score']:.4f}  [{r['lower']:.4f}, {r['upper']:.4f}] ({100 * r['level']:g}%)")
    return "\n".join(lines) + "\n"


def cmd_evaluate(cfg: RunConfig, hyp_path=None, ref_path=None) -> dict:
    hyp_path = Path(hyp_path) if hyp_path else cfg.out(TRANSLATION)
    if ref_path is None:
        cfg.require("test_target")
        ref_path = cfg.test_target
    report = evaluate(read_lines(hyp_path), read_lines(ref_path), cfg)
    _write(cfg.out(EVALUATION + ".json"), dumps(report))
    _write(cfg.out(EVALUATION + ".txt"), report_evaluation(report))
    return report


def sweep(cfg: RunConfig, counted, dictionary, dev_src: list[AnalyzedSentence], dev_ref: list[AnalyzedSentence]):
    """Score every threshold on the development corpus; return the table and
    the threshold with the lowest TER (smallest threshold on ties)."""
    thresholds = list(cfg.thresholds or [cfg.threshold])
    if not thresholds:
        raise ConfigError("threshold sweep is empty")
    ref = [format_analyzed_line(s).split() for s in dev_ref]
    table = []
    for th in thresholds:
        rb = _rulebase(cfg, counted, th)
        out, _ = translate_corpus(rb, dev_src, dictionary, cfg.workers)
        hyp = [format_analyzed_line(s).split() for s in out]
        table.append({"threshold": th, "TER": TER(hyp, ref).value, "BLEU": BLEU(hyp, ref).value, "rules": len(rb)})
    best = min(table, key=lambda row: (row["TER"], row["threshold"]))
    return table, best["threshold"]


def cmd_sweep(cfg: RunConfig) -> dict:
    cfg.require("dev_source", "dev_target")
    for train_key, dev_key in (("source", "dev_source"), ("target", "dev_target")):
        train = getattr(cfg, train_key)
        if train and Path(train).resolve() == Path(getattr(cfg, dev_key)).resolve():
            raise ConfigError("development corpus must differ from the training corpus")
    dictionary = _dictionary(cfg)
    counted = parse_counted(_body(_read(cfg.out(TEMPLATES))))
    dev = load_parallel(cfg.dev_source, cfg.dev_target)
    table, best = sweep(cfg, counted, dictionary, [p.source for p in dev], [p.target for p in dev])
    result = {"table": table, "best_threshold": best, "selection_mode": cfg.selection_mode}
    _write(cfg.out(SWEEP + ".json"), dumps(result))
    lines = ["threshold      TER     BLEU  rules"]
    lines += [f"{r['threshold']:>9g} {r['TER']:>8.4f} {r['BLEU']:>8.4f} {r['rules']:>6}" for r in table]
    lines.append(f"best threshold: {best:g}")
    _write(cfg.out(SWEEP + ".txt"), "\n".join(lines) + "\n")
    _write_rulebase(cfg.out(RULES), _rulebase(cfg, counted, best))
    return result


def cmd_run(cfg: RunConfig) -> dict:
    cmd_align(cfg)
    cmd_extract(cfg)
    cmd_learn(cfg)
    if cfg.thresholds and cfg.dev_source:
        cmd_sweep(cfg)
    else:
        cfg = cfg.replace(thresholds=None)
        cmd_genrules(cfg)
    result = {}
    if cfg.test_source:
        cmd_translate(cfg)
        if cfg.test_target:
            result = cmd_evaluate(cfg)
    return result


def cmd_fixture(directory: str | os.PathLike, size: int = 2000, dev_size: int = 300, test_size: int = 500,
                seed: int = 0, oov_rate: float = 0.0) -> Path:
    """Write a synthetic training/dev/test corpus, dictionary and config."""
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    for name, n, s in (("train", size, seed), ("dev", dev_size, seed + 1), ("test", test_size, seed + 2)):
        src, tgt = generate(n, s, oov_rate)
        write_corpus(d / f"{name}.src", src)
        write_corpus(d / f"{name}.tgt", tgt)
    _write(d / "bidix.xml", format_dictionary(dictionary_entries()))
    config = {
        "source": "train.src", "target": "train.tgt", "dictionary": "bidix.xml",
        "lexicalized": list(LEXICALIZED),
        "dev_source": "dev.src", "dev_target": "dev.tgt",
        "test_source": "test.src", "test_target": "test.tgt",
        "thresholds": list(range(1, 11)),
        "output_dir": "out",
    }
    return _write(d / "config.yaml", yaml.safe_dump(config, sort_keys=False))
