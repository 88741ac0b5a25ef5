"""Build the bundled Portuguese lemma lexicon from spaCy's lookup table.

Usage::

    pip download --no-deps spacy-lookups-data
    python scripts/build_lexicon.py pt_lemma_lookup.json.gz src/veritas/data/lemmas_pt.tsv.gz

The source table (spacy-lookups-data, MIT licensed) maps surface forms to
lemmas.  The output keeps only entries usable by the tokenizer and makes
the table consistent with how the pipeline sees text:

* keys and lemmas are lowercased and diacritic-stripped;
* keys that are not pure letter runs of length >= 2 are dropped;
* when several source keys collapse onto one normalized key, the lemma of
  the source key that was already lowercase and unaccented wins; otherwise
  the most frequent lemma, ties broken lexicographically;
* chains are followed to a fixpoint so every lemma is absent from the key
  set (lemma-closed); cycles resolve to their smallest member;
* identity entries are removed.
"""

import collections
import gzip
import io
import json
import re
import sys
import unicodedata

LETTERS = re.compile(r"[^\W\d_]{2,}")


def strip(s):
    s = unicodedata.normalize("NFD", s.lower())
    return unicodedata.normalize("NFC", "".join(c for c in s if unicodedata.category(c) != "Mn"))


def main(src, dst):
    with gzip.open(src, "rt", encoding="utf-8") as fh:
        raw = json.load(fh)

    candidates = collections.defaultdict(list)
    for key, lemma in raw.items():
        nkey, nlemma = strip(key), strip(lemma)
        if not LETTERS.fullmatch(nkey) or not LETTERS.fullmatch(nlemma):
            continue
        candidates[nkey].append((key == nkey, nlemma))

    table = {}
    for nkey, cands in candidates.items():
        exact = sorted({lem for is_exact, lem in cands if is_exact})
        if exact:
            table[nkey] = exact[0]
            continue
        counts = collections.Counter(lem for _, lem in cands)
        table[nkey] = min(counts, key=lambda lem: (-counts[lem], lem))

    resolved = {}
    for key in table:
        path = [key]
        seen = {key}
        node = table[key]
        while node in table and node not in seen and node not in resolved:
            path.append(node)
            seen.add(node)
            node = table[node]
        if node in resolved:
            final = resolved[node]
        elif node in seen:
            cycle = path[path.index(node):]
            final = min(cycle)
        else:
            final = node
        for p in path:
            resolved[p] = final

    out = sorted((k, v) for k, v in resolved.items() if k != v)
    with gzip.GzipFile(dst, "wb", mtime=0) as raw_fh:
        with open_text(raw_fh) as fh:
            fh.write("# surface<TAB>lemma, derived from spacy-lookups-data (MIT)\n")
            for k, v in out:
                fh.write(f"{k}\t{v}\n")
    print(f"{len(raw)} source entries -> {len(out)} lexicon entries", file=sys.stderr)


def open_text(raw_fh):
    return io.TextIOWrapper(raw_fh, encoding="utf-8", newline="\n")


if __name__ == "__main__":
    main(sys.argv[1], sys.argv[2])
