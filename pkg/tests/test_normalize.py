import gzip

import pytest
from hypothesis import given
from hypothesis import strategies as st

from veritas import ConfigError
from veritas.normalize import (
    LemmaLexicon,
    NormalizationMode,
    StemRule,
    StemRuleSet,
    StemStep,
    StopwordSet,
    data_path,
    lemmatize_token,
    load_lemma_lexicon,
    load_resources,
    load_stem_rules,
    load_stopwords,
    normalize_document,
    remove_stopwords,
    stem_token,
    strip_diacritics,
    tokenize,
)

PT_LETTERS = "abcdefghijklmnopqrstuvwxyzáàâãéêíóôõúüç"
words = st.text(alphabet=PT_LETTERS, min_size=1, max_size=14)


# tokenize / strip_diacritics

def test_tokenize_separators():
    assert tokenize("Dilma continua, presidente!") == ["dilma", "continua", "presidente"]


def test_tokenize_empty():
    assert tokenize("") == []
    assert tokenize("  \n\t ") == []


def test_tokenize_drops_short_digits_symbols():
    # "r", "é" and "o" fall under the two-letter minimum
    assert tokenize("R$ 100 é o valor") == ["valor"]


def test_tokenize_digits_split_words():
    assert tokenize("abc123def_gh") == ["abc", "def", "gh"]


def test_tokenize_keeps_accents_and_composes():
    assert tokenize("ELEIÇÃO") == ["eleição"]
    assert tokenize("eleição") == ["eleição"]  # decomposed cedilla


def test_strip_diacritics_examples():
    assert strip_diacritics("eleição") == "eleicao"
    assert strip_diacritics("brasil") == "brasil"
    assert strip_diacritics("ação") == "acao"
    assert strip_diacritics("pinguïm") == "pinguim"


@given(words)
def test_strip_diacritics_idempotent_length_preserving(w):
    once = strip_diacritics(w)
    assert strip_diacritics(once) == once
    assert len(once) == len(w)
    assert once.isascii()


# stop-words

def test_remove_stopwords_examples():
    sw = StopwordSet(frozenset({"o", "de"}))
    assert remove_stopwords(["o", "presidente", "de", "o", "brasil"], sw) == ["presidente", "brasil"]
    assert remove_stopwords(["a", "b"], StopwordSet(frozenset())) == ["a", "b"]
    assert remove_stopwords(["o", "de"], sw) == []


@given(st.lists(st.sampled_from(["o", "de", "casa", "lei", "para", "voto"])), st.sets(st.sampled_from(["o", "de", "para"])))
def test_remove_stopwords_idempotent(tokens, sw):
    sw = StopwordSet(frozenset(sw))
    once = remove_stopwords(tokens, sw)
    assert remove_stopwords(once, sw) == once
    assert all(t not in sw for t in once)
    it = iter(tokens)
    assert all(t in it for t in once)  # order-preserving subsequence


def test_stopword_whitespace_rejected():
    with pytest.raises(ConfigError):
        StopwordSet(frozenset({"a b"}))


def test_load_stopwords_strips_and_comments(tmp_path):
    p = tmp_path / "sw.txt"
    p.write_text("# comment\nNão\n\n  você \n", encoding="utf-8")
    assert load_stopwords(p).words == frozenset({"nao", "voce"})


def test_shipped_stopwords(resources):
    sw = resources.stopwords
    assert 150 <= len(sw) <= 250
    assert {"de", "que", "nao", "voce", "esta"} <= sw.words
    assert all(w == strip_diacritics(w) for w in sw.words)


# stemming

def test_stem_examples(resources):
    rules = resources.rules
    assert stem_token("casas", rules) == "cas"
    assert stem_token("meninas", rules) == "menin"
    assert stem_token("lei", rules) == "lei"


def test_stem_single_rule_file(tmp_path):
    p = tmp_path / "r.txt"
    p.write_text("step:plural minword:1\ns|1||\n", encoding="utf-8")
    rules = load_stem_rules(p)
    assert stem_token("casas", rules) == "casa"
    p.write_text("step:plural minword:1\ns|1|\n", encoding="utf-8")
    assert stem_token("casas", load_stem_rules(p)) == "casa"


def test_stem_longest_suffix_first():
    step = StemStep("s", 1, (StemRule("s", 1), StemRule("oes", 1, "ao")))
    assert StemRuleSet((step,)).stem("eleicoes") == "eleicao"


def test_stem_exceptions_and_min_stem():
    step = StemStep("s", 1, (StemRule("s", 2, "", frozenset({"lapis"})),))
    rules = StemRuleSet((step,))
    assert rules.stem("lapis") == "lapis"
    assert rules.stem("mas") == "ma"
    assert rules.stem("as") == "as"  # stem of length 1 < min_stem


def test_stem_step_stop_flag():
    a = StemStep("a", 1, (StemRule("ando", 2, ""),), stop_if_applied=True)
    b = StemStep("b", 1, (StemRule("a", 1, ""),))
    rules = StemRuleSet((a, b))
    assert rules.stem("falando") == "fal"
    assert rules.stem("casa") == "cas"


def test_stem_rule_longer_replacement_rejected():
    with pytest.raises(ConfigError):
        StemRule("a", 1, "ao")


@pytest.mark.parametrize(
    "body, lineno",
    [
        ("s|1||\n", 1),
        ("step:x minword:2\ns|one||\n", 2),
        ("step:x minword:2\ns|1\n", 2),
        ("step:x bogus\n", 1),
        ("step:x\n# c\ns|1||\ns|2||\n", 1),
        ("step:x\ns|1|aaa|\n", 2),
    ],
)
def test_stem_rules_errors_have_line_numbers(tmp_path, body, lineno):
    p = tmp_path / "r.txt"
    p.write_text(body, encoding="utf-8")
    with pytest.raises(ConfigError, match=f":{lineno}:"):
        load_stem_rules(p)


def test_stem_rules_diacritics_stripped_at_load(tmp_path):
    p = tmp_path / "r.txt"
    p.write_text("step:x minword:1\nções|1|ção|\n", encoding="utf-8")
    rule = load_stem_rules(p).steps[0].rules[0]
    assert (rule.suffix, rule.replacement) == ("coes", "cao")


def test_shipped_rules_well_formed(resources):
    rules = resources.rules
    assert [s.name for s in rules.steps][:2] == ["plural", "feminine"]
    for step in rules.steps:
        lens = [len(r.suffix) for r in step.rules]
        assert lens == sorted(lens, reverse=True)
        for r in step.rules:
            assert len(r.replacement) <= len(r.suffix)
            assert r.suffix.isascii() and r.suffix.isalpha()


@given(words)
def test_stem_never_lengthens_random(w):
    rules = load_resources(mode="stemming").rules
    w = strip_diacritics(w)
    assert len(stem_token(w, rules)) <= len(w)


def test_stem_never_lengthens_full_lexicon(resources):
    rules = load_stem_rules(data_path("stem_rules_pt.txt"))  # private cache
    lex = resources.lexicon.entries
    words = set(lex) | set(lex.values())
    assert len(words) > 700_000
    longer = [w for w in words if len(rules.stem(w)) > len(w)]
    assert longer == []


# lemmatization

def test_lemma_examples():
    lex = LemmaLexicon({"tinha": "ter", "eleicoes": "eleicao"})
    assert lemmatize_token("tinha", lex) == "ter"
    assert lemmatize_token("presidente", lex) == "presidente"
    assert lemmatize_token("eleicoes", lex) == "eleicao"


def test_load_lexicon_single(tmp_path):
    p = tmp_path / "l.tsv"
    p.write_text("# c\ntinha\tter\n", encoding="utf-8")
    assert load_lemma_lexicon(p).size == 1


def test_load_lexicon_duplicate_conflict(tmp_path):
    p = tmp_path / "l.tsv"
    p.write_text("x\ta\nx\tb\n", encoding="utf-8")
    with pytest.raises(ConfigError, match=":2:"):
        load_lemma_lexicon(p)


def test_load_lexicon_duplicate_after_stripping(tmp_path):
    p = tmp_path / "l.tsv"
    p.write_text("eleições\teleição\neleicoes\teleicao\n", encoding="utf-8")
    assert dict(load_lemma_lexicon(p).entries) == {"eleicoes": "eleicao"}


def test_load_lexicon_malformed(tmp_path):
    p = tmp_path / "l.tsv"
    p.write_text("ok\tfine\njustone\n", encoding="utf-8")
    with pytest.raises(ConfigError, match=":2:"):
        load_lemma_lexicon(p)


def test_load_lexicon_gzip(tmp_path):
    p = tmp_path / "l.tsv.gz"
    with gzip.open(p, "wt", encoding="utf-8") as fh:
        fh.write("tinha\tter\n")
    assert load_lemma_lexicon(p).lemma("tinha") == "ter"


def test_shipped_lexicon_is_lemma_closed(resources):
    lex = resources.lexicon.entries
    assert resources.lexicon.size > 500_000
    assert all(lex.get(lemma, lemma) == lemma for lemma in set(lex.values()))
    for key, lemma in lex.items():
        assert key == strip_diacritics(key.lower()) and lemma == strip_diacritics(lemma.lower())


def test_shipped_lexicon_samples(resources):
    lex = resources.lexicon
    assert lex.lemma("tinha") == "ter"
    assert lex.lemma("eleicoes") == "eleicao"


@given(st.sampled_from(["tinha", "eleicoes", "casas", "foram", "politicos", "presidente", "zzz"]))
def test_lemmatize_idempotent(w):
    lex = load_resources(mode="lemmatization").lexicon
    once = lemmatize_token(w, lex)
    assert lemmatize_token(once, lex) == once


# full pipeline

def test_normalize_stemming_example(resources):
    out = resources.normalize("As casas caíram", NormalizationMode.STEMMING)
    assert out == ["cas", "cair"]


def test_normalize_empty_text(resources):
    for mode in NormalizationMode:
        assert resources.normalize("", mode) == []


@given(st.text(max_size=80))
def test_normalize_stopwords_only_without_list(text):
    expected = [strip_diacritics(t) for t in tokenize(text)]
    assert normalize_document(text, NormalizationMode.STOPWORDS_ONLY, stopwords=StopwordSet(frozenset())) == expected
    assert normalize_document(text, "stopwords") == expected


def test_normalize_missing_resource():
    with pytest.raises(ConfigError):
        normalize_document("casas", NormalizationMode.STEMMING)
    with pytest.raises(ConfigError):
        normalize_document("casas", NormalizationMode.LEMMATIZATION)


def test_mode_parse_aliases():
    assert NormalizationMode.parse("stem") is NormalizationMode.STEMMING
    with pytest.raises(ConfigError):
        NormalizationMode.parse("pos-tagging")


@given(st.text(alphabet=PT_LETTERS + " .,!", max_size=200))
def test_normalize_deterministic(text):
    res = load_resources()
    for mode in NormalizationMode:
        assert res.normalize(text, mode) == res.normalize(text, mode)


def test_stemming_vocabulary_not_larger(mini_corpus, resources):
    sizes = {}
    for mode in NormalizationMode:
        vocab = set()
        for toks in resources.normalize_many(mini_corpus.texts, mode):
            vocab.update(toks)
        sizes[mode] = len(vocab)
    assert sizes[NormalizationMode.STEMMING] <= sizes[NormalizationMode.STOPWORDS_ONLY]
    assert sizes[NormalizationMode.LEMMATIZATION] <= sizes[NormalizationMode.STOPWORDS_ONLY]
