"""Experiment runner: one pipeline cell or the full setups x classifiers grid.

Every cell of a matrix run shares one seeded split, so the feature
matrices for a given (mode, dictionary cap) are built once and reused by
all classifiers.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import time
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import yaml

from veritas import classify
from veritas.corpus import Corpus, SplitConfig, split_train_test
from veritas.errors import ConfigError, PipelineError, VeritasError
from veritas.evaluation import EvalReport, evaluate, format_percent
from veritas.normalize import NormalizationMode, load_resources
from veritas.vectorize import IdfVariant, TfidfModel, build_vocabulary

log = logging.getLogger(__name__)

SCHEMA = "veritas-report/1"
CLASSIFIER_COLUMNS = {"svm": "SVM", "knn": "KNN", "dt": "DT"}
MODE_TITLES = {
    NormalizationMode.STOPWORDS_ONLY: "Stop-Words Removal",
    NormalizationMode.LEMMATIZATION: "Lemmatization Technique",
    NormalizationMode.STEMMING: "Stemming Technique",
}


def setup_name(mode, max_features):
    title = MODE_TITLES[NormalizationMode.parse(mode)]
    return title if max_features is None else f"{title} + Dictionary of {max_features} words"


# the row order of the published accuracy table
PAPER_SETUPS = tuple(
    (setup_name(mode, cap), mode, cap)
    for mode in (NormalizationMode.STOPWORDS_ONLY, NormalizationMode.LEMMATIZATION, NormalizationMode.STEMMING)
    for cap in (None, 500, 5000)
)


@dataclass(frozen=True)
class Setup:
    name: str
    mode: NormalizationMode
    max_features: int | None = None


@dataclass(frozen=True)
class ResourcePaths:
    stopwords: str = "builtin"
    stem_rules: str = "builtin"
    lexicon: str = "builtin"

    def __post_init__(self):
        for name in ("stopwords", "stem_rules", "lexicon"):
            value = getattr(self, name)
            if value in (None, "builtin"):
                continue
            if not Path(value).is_file():
                raise ConfigError(f"{name} resource {str(value)!r} does not exist")


@dataclass(frozen=True)
class ExperimentConfig:
    mode: NormalizationMode
    max_features: int | None
    classifier: str
    split: SplitConfig = field(default_factory=SplitConfig)
    idf_variant: IdfVariant = IdfVariant.SMOOTHED
    svm: classify.SvmParams = field(default_factory=classify.SvmParams)
    knn_k: int = 3
    max_leaves: int | None = 3
    max_depth: int | None = None
    resources: ResourcePaths = field(default_factory=ResourcePaths)
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "mode", NormalizationMode.parse(self.mode))
        object.__setattr__(self, "idf_variant", IdfVariant.parse(self.idf_variant))
        if self.classifier not in CLASSIFIER_COLUMNS:
            raise ConfigError(f"unknown classifier {self.classifier!r}")
        if self.max_features is not None and (int(self.max_features) != self.max_features or self.max_features < 1):
            raise ConfigError(f"max_features must be a positive integer or null, got {self.max_features!r}")
        if self.max_depth is not None and self.max_leaves is not None:
            raise ConfigError("max_leaves and max_depth are mutually exclusive")
        if not self.name:
            object.__setattr__(self, "name", setup_name(self.mode, self.max_features))

    def to_dict(self):
        return {
            "name": self.name,
            "mode": self.mode.value,
            "max_features": self.max_features,
            "classifier": self.classifier,
            "split": asdict(self.split),
            "idf_variant": self.idf_variant.value,
            "svm": asdict(self.svm),
            "knn_k": self.knn_k,
            "max_leaves": self.max_leaves,
            "max_depth": self.max_depth,
            "resources": asdict(self.resources),
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            mode=d["mode"],
            max_features=d["max_features"],
            classifier=d["classifier"],
            split=SplitConfig(**d["split"]),
            idf_variant=d["idf_variant"],
            svm=classify.SvmParams(**d["svm"]),
            knn_k=d["knn_k"],
            max_leaves=d["max_leaves"],
            max_depth=d["max_depth"],
            resources=ResourcePaths(**d["resources"]),
            name=d["name"],
        )


@dataclass(frozen=True)
class MatrixConfig:
    """Base settings shared by every cell plus the list of setups."""

    setups: tuple[Setup, ...]
    classifiers: tuple[str, ...] = ("svm", "knn", "dt")
    split: SplitConfig = field(default_factory=SplitConfig)
    idf_variant: IdfVariant = IdfVariant.SMOOTHED
    svm: classify.SvmParams = field(default_factory=classify.SvmParams)
    knn_k: int = 3
    max_leaves: int | None = 3
    max_depth: int | None = None
    resources: ResourcePaths = field(default_factory=ResourcePaths)

    def cell(self, setup: Setup, classifier: str) -> ExperimentConfig:
        return ExperimentConfig(
            mode=setup.mode,
            max_features=setup.max_features,
            classifier=classifier,
            split=self.split,
            idf_variant=self.idf_variant,
            svm=self.svm,
            knn_k=self.knn_k,
            max_leaves=self.max_leaves,
            max_depth=self.max_depth,
            resources=self.resources,
            name=setup.name,
        )

    def with_seed(self, seed):
        return replace(self, split=replace(self.split, seed=int(seed)), svm=replace(self.svm, seed=int(seed)))


def default_matrix_config(seed=42) -> MatrixConfig:
    setups = tuple(Setup(n, m, c) for n, m, c in PAPER_SETUPS)
    return MatrixConfig(setups=setups).with_seed(seed)


def parse_matrix_config(doc) -> MatrixConfig:
    """Build a MatrixConfig from a parsed YAML/JSON mapping."""
    if not isinstance(doc, dict):
        raise ConfigError("config must be a mapping")
    known = {"seed", "split", "idf_variant", "svm", "knn", "tree", "resources", "classifiers", "experiments"}
    unknown = set(doc) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    try:
        seed = int(doc.get("seed", 42))
        split = SplitConfig(seed=seed, **(doc.get("split") or {}))
        svm = classify.SvmParams(**{"seed": seed, **(doc.get("svm") or {})})
        tree = dict(doc.get("tree") or {"max_leaves": 3})
        if "max_depth" in tree and "max_leaves" not in tree:
            tree["max_leaves"] = None
        knn = doc.get("knn") or {}
        experiments = doc.get("experiments")
        if experiments is None:
            setups = tuple(Setup(n, m, c) for n, m, c in PAPER_SETUPS)
        else:
            setups = []
            for e in experiments:
                mode = NormalizationMode.parse(e["mode"])
                cap = e.get("max_features")
                setups.append(Setup(e.get("name") or setup_name(mode, cap), mode, cap))
            setups = tuple(setups)
        if not setups:
            raise ConfigError("config lists no experiments")
        names = [s.name for s in setups]
        if len(set(names)) != len(names):
            raise ConfigError("experiment names must be unique")
        cfg = MatrixConfig(
            setups=setups,
            classifiers=tuple(c.lower() for c in doc.get("classifiers", ("svm", "knn", "dt"))),
            split=split,
            idf_variant=IdfVariant.parse(doc.get("idf_variant", "smoothed")),
            svm=svm,
            knn_k=int(knn.get("k", 3)),
            max_leaves=tree.get("max_leaves"),
            max_depth=tree.get("max_depth"),
            resources=ResourcePaths(**(doc.get("resources") or {})),
        )
    except (TypeError, KeyError, ValueError) as exc:
        raise ConfigError(f"invalid config: {exc}") from None
    for s in cfg.setups:
        for c in cfg.classifiers:
            cfg.cell(s, c)  # validates every combination
    return cfg


def load_matrix_config(path) -> MatrixConfig:
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"config file {str(p)!r} does not exist")
    try:
        doc = yaml.safe_load(p.read_text(encoding="utf-8"))
    except yaml.YAMLError as exc:
        raise ConfigError(f"{p}: {exc}") from None
    return parse_matrix_config(doc)


@dataclass
class ExperimentReport:
    config: dict
    dictionary_size: int
    eval: EvalReport
    wall_time: float | None
    seed: int

    def to_dict(self, timings=True):
        return {
            "config": self.config,
            "dictionary_size": self.dictionary_size,
            "eval": self.eval.to_dict(),
            "wall_time": self.wall_time if timings else None,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(d["config"], int(d["dictionary_size"]), EvalReport.from_dict(d["eval"]), d["wall_time"], int(d["seed"]))


@dataclass
class ResultsTable:
    setups: list
    classifiers: list
    cells: dict  # (setup name, classifier) -> ExperimentReport
    dictionary_sizes: dict  # mode value -> uncapped vocabulary size
    seed: int

    def accuracy(self, setup, classifier):
        return self.cells[(setup, classifier)].eval.accuracy

    def is_complete(self):
        return all((s, c) in self.cells for s in self.setups for c in self.classifiers)

    def to_dict(self, timings=True):
        return {
            "schema": SCHEMA,
            "seed": self.seed,
            "setups": list(self.setups),
            "classifiers": list(self.classifiers),
            "dictionary_sizes": dict(self.dictionary_sizes),
            "cells": [
                {"setup": s, "classifier": c, "report": self.cells[(s, c)].to_dict(timings)}
                for s in self.setups
                for c in self.classifiers
            ],
        }

    @classmethod
    def from_dict(cls, d):
        if d.get("schema") != SCHEMA:
            raise ConfigError(f"unsupported report schema {d.get('schema')!r}")
        cells = {(c["setup"], c["classifier"]): ExperimentReport.from_dict(c["report"]) for c in d["cells"]}
        return cls(list(d["setups"]), list(d["classifiers"]), cells, dict(d["dictionary_sizes"]), int(d["seed"]))

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


class _FeatureCache:
    """Memoizes the stages shared between cells of one split."""

    def __init__(self, train: Corpus, test: Corpus, resources: ResourcePaths, idf_variant):
        self.train, self.test = train, test
        self.resources = resources
        self.idf_variant = idf_variant
        self._tokens = {}
        self._features = {}
        self._vocab_size = {}

    def tokens(self, mode):
        if mode not in self._tokens:
            res = _stage("resources", load_resources, self.resources.stopwords, self.resources.stem_rules,
                         self.resources.lexicon, mode)
            self._tokens[mode] = _stage(
                "normalize", lambda: (res.normalize_many(self.train.texts, mode), res.normalize_many(self.test.texts, mode))
            )
        return self._tokens[mode]

    def uncapped_size(self, mode):
        if mode not in self._vocab_size:
            self._vocab_size[mode] = _stage("vocabulary", build_vocabulary, self.tokens(mode)[0]).size
        return self._vocab_size[mode]

    def features(self, mode, cap):
        key = (mode, cap)
        if key not in self._features:
            train_tok, test_tok = self.tokens(mode)
            model = _stage("vocabulary", TfidfModel.fit, train_tok, cap, self.idf_variant)
            X_train = _stage("vectorize", model.feature_matrix, train_tok, self.train.labels)
            X_test = _stage("vectorize", model.feature_matrix, test_tok, self.test.labels)
            self._features[key] = (model, X_train, X_test)
        return self._features[key]


def _stage(name, fn, *args):
    try:
        return fn(*args)
    except PipelineError:
        raise
    except VeritasError as exc:
        raise type(exc)(f"{name}: {exc}") from exc
    except Exception as exc:  # noqa: BLE001 - re-raised with the stage attached
        raise PipelineError(name, f"{type(exc).__name__}: {exc}") from exc


def _train_eval(cfg: ExperimentConfig, X_train, X_test):
    if cfg.classifier == "svm":
        model = _stage("train", classify.train_linear_svm, X_train, cfg.svm)
    elif cfg.classifier == "knn":
        model = _stage("train", classify.train_knn, X_train, cfg.knn_k)
    else:
        model = _stage(
            "train", lambda: classify.train_decision_tree(X_train, max_leaves=cfg.max_leaves, max_depth=cfg.max_depth)
        )
    return model, _stage("evaluate", evaluate, model, X_test)


def _run_cell(cfg, cache):
    t0 = time.perf_counter()
    tfidf, X_train, X_test = cache.features(cfg.mode, cfg.max_features)
    _, report = _train_eval(cfg, X_train, X_test)
    return ExperimentReport(
        config=cfg.to_dict(),
        dictionary_size=tfidf.dimension,
        eval=report,
        wall_time=time.perf_counter() - t0,
        seed=cfg.split.seed,
    )


def run_experiment(cfg: ExperimentConfig, corpus: Corpus) -> ExperimentReport:
    """split -> normalize -> vocabulary (train only) -> tf-idf + L2 -> train -> evaluate."""
    t0 = time.perf_counter()
    train, test = _stage("split", split_train_test, corpus, cfg.split)
    cache = _FeatureCache(train, test, cfg.resources, cfg.idf_variant)
    report = _run_cell(cfg, cache)
    report.wall_time = time.perf_counter() - t0
    return report


def run_matrix(corpus: Corpus, base: MatrixConfig, progress=None) -> ResultsTable:
    train, test = _stage("split", split_train_test, corpus, base.split)
    cache = _FeatureCache(train, test, base.resources, base.idf_variant)
    cells = {}
    for setup in base.setups:
        for clf in base.classifiers:
            cfg = base.cell(setup, clf)
            try:
                cells[(setup.name, clf)] = _run_cell(cfg, cache)
            except PipelineError as exc:
                raise PipelineError(f"cell '{setup.name}' x {clf}", exc) from exc
            except VeritasError as exc:
                raise type(exc)(f"cell '{setup.name}' x {clf}: {exc}") from exc
            if progress is not None:
                progress(setup.name, clf, cells[(setup.name, clf)])
    modes = []
    for s in base.setups:
        if s.mode not in modes:
            modes.append(s.mode)
    sizes = {m.value: cache.uncapped_size(m) for m in modes}
    return ResultsTable(
        setups=[s.name for s in base.setups],
        classifiers=list(base.classifiers),
        cells=cells,
        dictionary_sizes=sizes,
        seed=base.split.seed,
    )


def render_report(table: ResultsTable, fmt="text", timings=True) -> str:
    if not table.is_complete():
        raise ConfigError("results table is incomplete")
    if fmt == "json":
        return json.dumps(table.to_dict(timings), indent=2, sort_keys=False) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["setup", "classifier", "accuracy", "dictionary_size"])
        for s in table.setups:
            for c in table.classifiers:
                r = table.cells[(s, c)]
                w.writerow([s, c, format_percent(r.eval.accuracy), r.dictionary_size])
        return buf.getvalue()
    if fmt == "text":
        return _render_text(table, timings)
    raise ConfigError(f"unknown report format {fmt!r}")


def _render_text(table, timings):
    name_w = max(len("Experiment name"), *(len(s) for s in table.setups))
    cols = [CLASSIFIER_COLUMNS[c] for c in table.classifiers]
    lines = [f"Accuracy rates (%)  seed={table.seed}", ""]
    lines.append(f"{'Experiment name':<{name_w}}  " + "  ".join(f"{c:>6}" for c in cols))
    lines.append("-" * (name_w + 8 * len(cols)))
    for s in table.setups:
        accs = [format_percent(table.accuracy(s, c)) for c in table.classifiers]
        lines.append(f"{s:<{name_w}}  " + "  ".join(f"{a:>6}" for a in accs))
    lines += ["", "Dictionary size (no cap)"]
    for mode, size in table.dictionary_sizes.items():
        lines.append(f"  {MODE_TITLES[NormalizationMode(mode)]:<{name_w}}  {size:>8} words")
    lines += ["", "Confusion matrices (rows: true label, columns: predicted)"]
    for s in table.setups:
        for c in table.classifiers:
            r = table.cells[(s, c)]
            head = f"[{s} | {CLASSIFIER_COLUMNS[c]}]  accuracy {format_percent(r.eval.accuracy)}"
            if timings and r.wall_time is not None:
                head += f"  ({r.wall_time:.2f} s)"
            lines.append("")
            lines.append(head)
            lines.extend("  " + ln for ln in r.eval.confusion.render().splitlines())
    return "\n".join(lines) + "\n"
