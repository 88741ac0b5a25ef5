"""Tokenization, stop-word removal, stemming and lemmatization.

Every token goes through the same chain: lowercase letter runs of length
>= 2, diacritics stripped, stop-words removed, then (depending on the
mode) a suffix-stripping stemmer or a lexicon lemmatizer.
"""

from __future__ import annotations

import enum
import functools
import gzip
import re
import unicodedata
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from types import MappingProxyType

from veritas.errors import ConfigError

_TOKEN_RE = re.compile(r"[^\W\d_]+")


class NormalizationMode(str, enum.Enum):
    STOPWORDS_ONLY = "stopwords"
    STEMMING = "stemming"
    LEMMATIZATION = "lemmatization"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("-", "_")
        aliases = {
            "stopwords": cls.STOPWORDS_ONLY,
            "stopwords_only": cls.STOPWORDS_ONLY,
            "stop_words": cls.STOPWORDS_ONLY,
            "stem": cls.STEMMING,
            "stemming": cls.STEMMING,
            "lemma": cls.LEMMATIZATION,
            "lemmatization": cls.LEMMATIZATION,
        }
        try:
            return aliases[key]
        except KeyError:
            raise ConfigError(f"unknown normalization mode {value!r}") from None


def tokenize(text: str) -> list[str]:
    """Lowercase maximal letter runs of length >= 2, in text order."""
    text = unicodedata.normalize("NFC", text.lower())
    return [t for t in _TOKEN_RE.findall(text) if len(t) >= 2]


def strip_diacritics(token: str) -> str:
    if token.isascii():
        return token
    decomposed = unicodedata.normalize("NFD", token)
    base = "".join(c for c in decomposed if unicodedata.category(c) != "Mn")
    return unicodedata.normalize("NFC", base)


def _clean_word(raw: str) -> str:
    return strip_diacritics(unicodedata.normalize("NFC", raw.strip().lower()))


# -- stop-words ---------------------------------------------------------------


@dataclass(frozen=True)
class StopwordSet:
    words: frozenset = frozenset()

    def __post_init__(self):
        bad = [w for w in self.words if not w or any(c.isspace() for c in w)]
        if bad:
            raise ConfigError(f"stop-word contains whitespace: {bad[0]!r}")

    def __contains__(self, token):
        return token in self.words

    def __len__(self):
        return len(self.words)


def remove_stopwords(tokens, stopwords) -> list[str]:
    words = stopwords.words if isinstance(stopwords, StopwordSet) else stopwords
    return [t for t in tokens if t not in words]


def load_stopwords(path) -> StopwordSet:
    words = set()
    for lineno, line in _read_lines(path):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if any(c.isspace() for c in line):
            raise ConfigError(f"{path}:{lineno}: stop-word line holds more than one token")
        words.add(_clean_word(line))
    return StopwordSet(frozenset(words))


# -- stemming -----------------------------------------------------------------


@dataclass(frozen=True)
class StemRule:
    suffix: str
    min_stem: int
    replacement: str = ""
    exceptions: frozenset = frozenset()

    def __post_init__(self):
        if len(self.replacement) > len(self.suffix):
            raise ConfigError(f"rule {self.suffix!r}: replacement {self.replacement!r} is longer than the suffix")

    def applies(self, word):
        return (
            word.endswith(self.suffix)
            and len(word) - len(self.suffix) >= self.min_stem
            and word not in self.exceptions
        )


@dataclass(frozen=True)
class StemStep:
    name: str
    min_word_length: int
    rules: tuple[StemRule, ...]
    stop_if_applied: bool = False
    _by_suffix: dict = field(init=False, repr=False, compare=False)
    _lengths: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        # longest suffix first; the sort is stable so file order breaks ties
        ordered = tuple(sorted(self.rules, key=lambda r: -len(r.suffix)))
        object.__setattr__(self, "rules", ordered)
        by_suffix = {}
        for rule in ordered:
            if rule.suffix in by_suffix:
                raise ConfigError(f"step {self.name!r}: duplicate suffix {rule.suffix!r}")
            by_suffix[rule.suffix] = rule
        object.__setattr__(self, "_by_suffix", by_suffix)
        object.__setattr__(self, "_lengths", tuple(sorted({len(s) for s in by_suffix}, reverse=True)))

    def apply(self, word):
        """Return (new_word, fired)."""
        if len(word) < self.min_word_length:
            return word, False
        for n in self._lengths:
            if n > len(word):
                continue
            rule = self._by_suffix.get(word[-n:])
            if rule is not None and rule.applies(word):
                return word[: len(word) - n] + rule.replacement, True
        return word, False


@dataclass(frozen=True)
class StemRuleSet:
    steps: tuple[StemStep, ...]
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def stem(self, token):
        cached = self._cache.get(token)
        if cached is not None:
            return cached
        word = token
        for step in self.steps:
            word, fired = step.apply(word)
            if fired and step.stop_if_applied:
                break
        self._cache[token] = word
        return word


def stem_token(token: str, rules: StemRuleSet) -> str:
    return rules.stem(token)


_STEP_RE = re.compile(r"^step:(\S+)((?:\s+\S+)*)$")


def load_stem_rules(path) -> StemRuleSet:
    """Parse a rule table.

    ``step:<name> minword:<n> [stop]`` opens a step and
    ``suffix|min_stem|replacement|exc1,exc2`` adds a rule to it.
    """
    steps = []
    current = None

    def close():
        if current is not None:
            name, minword, stop, rules, lineno = current
            try:
                steps.append(StemStep(name, minword, tuple(rules), stop))
            except ConfigError as exc:
                raise ConfigError(f"{path}:{lineno}: {exc}") from None

    for lineno, line in _read_lines(path):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        m = _STEP_RE.match(line)
        if m:
            close()
            name, opts = m.group(1), m.group(2).split()
            minword, stop = 0, False
            for opt in opts:
                if opt == "stop":
                    stop = True
                elif opt.startswith("minword:") and opt[8:].isdigit():
                    minword = int(opt[8:])
                else:
                    raise ConfigError(f"{path}:{lineno}: bad step option {opt!r}")
            current = (name, minword, stop, [], lineno)
            continue
        if current is None:
            raise ConfigError(f"{path}:{lineno}: rule before the first step line")
        fields = line.split("|")
        if len(fields) == 3:
            fields.append("")
        if len(fields) != 4:
            raise ConfigError(f"{path}:{lineno}: expected suffix|min_stem|replacement|exceptions")
        suffix, min_stem, repl, exc = fields
        suffix, repl = _clean_word(suffix), _clean_word(repl)
        if not _TOKEN_RE.fullmatch(suffix):
            raise ConfigError(f"{path}:{lineno}: suffix must be letters, got {fields[0]!r}")
        if repl and not _TOKEN_RE.fullmatch(repl):
            raise ConfigError(f"{path}:{lineno}: replacement must be letters, got {fields[2]!r}")
        if not min_stem.strip().isdigit():
            raise ConfigError(f"{path}:{lineno}: min_stem must be a non-negative integer")
        exceptions = frozenset(_clean_word(e) for e in exc.split(",") if e.strip())
        try:
            current[3].append(StemRule(suffix, int(min_stem), repl, exceptions))
        except ConfigError as e:
            raise ConfigError(f"{path}:{lineno}: {e}") from None
    close()
    if not steps:
        raise ConfigError(f"{path}: no stemming steps defined")
    return StemRuleSet(tuple(steps))


# -- lemmatization ------------------------------------------------------------


@dataclass(frozen=True)
class LemmaLexicon:
    entries: MappingProxyType

    def __post_init__(self):
        if not isinstance(self.entries, MappingProxyType):
            object.__setattr__(self, "entries", MappingProxyType(dict(self.entries)))

    @property
    def size(self):
        return len(self.entries)

    def __len__(self):
        return len(self.entries)

    def lemma(self, token):
        return self.entries.get(token, token)


def lemmatize_token(token: str, lexicon: LemmaLexicon) -> str:
    return lexicon.entries.get(token, token)


def load_lemma_lexicon(path) -> LemmaLexicon:
    """Two-column ``surface<TAB>lemma`` file; ``.gz`` files are read transparently."""
    entries = {}
    for lineno, line in _read_lines(path):
        line = line.rstrip("\r\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2 or not parts[0].strip() or not parts[1].strip():
            raise ConfigError(f"{path}:{lineno}: expected 'surface<TAB>lemma'")
        key, lemma = _clean_word(parts[0]), _clean_word(parts[1])
        prev = entries.setdefault(key, lemma)
        if prev != lemma:
            raise ConfigError(f"{path}:{lineno}: duplicate key {key!r} maps to {prev!r} and {lemma!r}")
    return LemmaLexicon(entries)


# -- pipeline -----------------------------------------------------------------


def normalize_document(text, mode, stopwords=None, rules=None, lexicon=None) -> list[str]:
    mode = NormalizationMode.parse(mode)
    if mode is NormalizationMode.STEMMING and rules is None:
        raise ConfigError("stemming mode needs a stem rule set")
    if mode is NormalizationMode.LEMMATIZATION and lexicon is None:
        raise ConfigError("lemmatization mode needs a lemma lexicon")
    tokens = [strip_diacritics(t) for t in tokenize(text)]
    if stopwords is not None:
        tokens = remove_stopwords(tokens, stopwords)
    if mode is NormalizationMode.STEMMING:
        return [rules.stem(t) for t in tokens]
    if mode is NormalizationMode.LEMMATIZATION:
        get = lexicon.entries.get
        return [get(t, t) for t in tokens]
    return tokens


@dataclass(frozen=True)
class Resources:
    stopwords: StopwordSet
    rules: StemRuleSet | None = None
    lexicon: LemmaLexicon | None = None

    def normalize(self, text, mode):
        return normalize_document(text, mode, self.stopwords, self.rules, self.lexicon)

    def normalize_many(self, texts, mode):
        return [self.normalize(t, mode) for t in texts]


def data_path(name):
    return Path(str(resources.files("veritas") / "data" / name))


DEFAULT_STOPWORDS = "stopwords_pt.txt"
DEFAULT_STEM_RULES = "stem_rules_pt.txt"
DEFAULT_LEXICON = "lemmas_pt.tsv.gz"


def resolve_resource(path, default_name):
    """``None`` or ``"builtin"`` selects the bundled file."""
    if path is None or str(path) == "builtin":
        return data_path(default_name)
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"resource file {str(p)!r} does not exist")
    return p


@functools.lru_cache(maxsize=8)
def _cached(loader, path):
    return loader(path)


def load_resources(stopwords=None, stem_rules=None, lexicon=None, mode=None) -> Resources:
    """Load (and cache) the resources a mode needs; ``mode=None`` loads all."""
    mode = NormalizationMode.parse(mode) if mode is not None else None
    sw = _cached(load_stopwords, resolve_resource(stopwords, DEFAULT_STOPWORDS))
    rules = lex = None
    if mode in (None, NormalizationMode.STEMMING):
        rules = _cached(load_stem_rules, resolve_resource(stem_rules, DEFAULT_STEM_RULES))
    if mode in (None, NormalizationMode.LEMMATIZATION):
        lex = _cached(load_lemma_lexicon, resolve_resource(lexicon, DEFAULT_LEXICON))
    return Resources(sw, rules, lex)


def _read_lines(path):
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"resource file {str(path)!r} does not exist")
    opener = gzip.open if path.suffix == ".gz" else open
    try:
        with opener(path, "rt", encoding="utf-8") as fh:
            yield from enumerate(fh, start=1)
    except UnicodeDecodeError as exc:
        raise ConfigError(f"{path}: not valid UTF-8 ({exc})") from None
