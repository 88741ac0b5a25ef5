"""``veritas`` command line.

Exit codes: 0 success, 1 configuration error, 2 data error, 3 internal error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from veritas import harness
from veritas.corpus import SplitConfig, corpus_stats, load_corpus, split_train_test
from veritas.errors import ConfigError, VeritasError
from veritas.normalize import NormalizationMode, data_path, lemmatize_token, load_resources, strip_diacritics
from veritas.vectorize import IdfVariant, TfidfModel, dump_vocabulary

log = logging.getLogger("veritas")

MINI_CORPUS = "mini"


def _corpus_path(arg):
    path = arg or os.environ.get("VERITAS_CORPUS")
    if not path:
        raise ConfigError("no corpus given: pass --corpus or set VERITAS_CORPUS")
    if path == MINI_CORPUS:
        return data_path("mini_corpus")
    return Path(path)


def _emit(text, out):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_run(args):
    cfg_path = args.config or data_path("paper_matrix.yaml")
    cfg = harness.load_matrix_config(cfg_path)
    if args.seed is not None:
        cfg = cfg.with_seed(args.seed)
    corpus = load_corpus(_corpus_path(args.corpus))

    def progress(setup, clf, rep):
        log.info("%-50s %-3s %6.2f%%  V=%d", setup, clf, rep.eval.accuracy, rep.dictionary_size)

    table = harness.run_matrix(corpus, cfg, progress=progress)
    _emit(harness.render_report(table, args.format, timings=not args.no_timings), args.out)


def cmd_stats(args):
    corpus = load_corpus(_corpus_path(args.corpus))
    sw = load_resources(mode="stopwords").stopwords if args.stopwords else None
    stats = corpus_stats(corpus, stopwords=sw)
    if args.json:
        print(json.dumps(stats.as_dict(), indent=2))
        return
    d = stats.as_dict()
    print(f"documents            {d['total_docs']}")
    for lab, n in d["docs_per_label"].items():
        print(f"  {lab:<18} {n}")
    print(f"mean tokens per doc  {d['mean_tokens_per_doc']:.2f}")
    for lab, n in d["token_count_per_label"].items():
        print(f"  tokens {lab:<11} {n}")
    if corpus.skipped:
        print(f"skipped files        {len(corpus.skipped)}")


def cmd_stem(args):
    rules = load_resources(stem_rules=args.rules, mode="stemming").rules
    for w in args.words:
        token = strip_diacritics(w.lower())
        print(f"{w}\t{rules.stem(token)}")


def cmd_lemma(args):
    lexicon = load_resources(lexicon=args.lexicon, mode="lemmatization").lexicon
    for w in args.words:
        token = strip_diacritics(w.lower())
        print(f"{w}\t{lemmatize_token(token, lexicon)}")


def cmd_vocab(args):
    corpus = load_corpus(_corpus_path(args.corpus))
    mode = NormalizationMode.parse(args.mode)
    if args.all_documents:
        train = corpus
    else:
        train, _ = split_train_test(corpus, SplitConfig(test_fraction=args.test_fraction, seed=args.seed))
    res = load_resources(mode=mode)
    tokens = res.normalize_many(train.texts, mode)
    model = TfidfModel.fit(tokens, args.max_features, IdfVariant.parse(args.idf))
    dump_vocabulary(model.vocabulary, model.idf, args.out)
    print(f"{model.dimension} terms written to {args.out}", file=sys.stderr)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # usage errors are configuration errors, not argparse's default exit code 2
        self.print_usage(sys.stderr)
        self.exit(ConfigError.exit_code, f"{self.prog}: error: {message}\n")


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    p = _Parser(prog="veritas", description="Portuguese fake-news classification experiments")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    corpus_help = "corpus root with fake/ and true/ (default: $VERITAS_CORPUS; 'mini' = bundled mini-corpus)"

    r = sub.add_parser("run", help="run the experiment matrix", parents=[common])
    r.add_argument("--corpus", help=corpus_help)
    r.add_argument("--config", help="matrix config (YAML/JSON); default: bundled paper setup")
    r.add_argument("--seed", type=int)
    r.add_argument("--format", choices=("text", "csv", "json"), default="text")
    r.add_argument("--out")
    r.add_argument("--no-timings", action="store_true", help="omit wall times (byte-stable output)")
    r.set_defaults(func=cmd_run)

    s = sub.add_parser("stats", help="corpus statistics", parents=[common])
    s.add_argument("--corpus", help=corpus_help)
    s.add_argument("--stopwords", action="store_true", help="count tokens after stop-word removal")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_stats)

    st = sub.add_parser("stem", help="stem words", parents=[common])
    st.add_argument("words", nargs="+")
    st.add_argument("--rules", help="rule file (default: bundled)")
    st.set_defaults(func=cmd_stem)

    le = sub.add_parser("lemma", help="lemmatize words", parents=[common])
    le.add_argument("words", nargs="+")
    le.add_argument("--lexicon", help="lexicon TSV (default: bundled)")
    le.set_defaults(func=cmd_lemma)

    v = sub.add_parser("vocab", help="dump a fitted vocabulary as TSV", parents=[common])
    v.add_argument("--corpus", help=corpus_help)
    v.add_argument("--mode", required=True, choices=[m.value for m in NormalizationMode])
    v.add_argument("--max-features", type=int)
    v.add_argument("--out", required=True)
    v.add_argument("--seed", type=int, default=42)
    v.add_argument("--test-fraction", type=float, default=0.3)
    v.add_argument("--all-documents", action="store_true", help="fit on the whole corpus, not the train split")
    v.add_argument("--idf", choices=[x.value for x in IdfVariant], default="smoothed")
    v.set_defaults(func=cmd_vocab)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(message)s",
        stream=sys.stderr,
    )
    try:
        args.func(args)
    except VeritasError as exc:
        print(f"veritas: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except Exception as exc:  # noqa: BLE001
        print(f"veritas: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
