"""Generate the bundled 60-document synthetic mini-corpus (30 fake, 30 true).

The texts are random Portuguese-like news snippets: a shared pool of
political vocabulary plus label-leaning pools (sensational wording for
fake, institutional wording for true), with inflected forms, accents,
punctuation and numbers so every preprocessing step has work to do.

    python scripts/make_mini_corpus.py src/veritas/data/mini_corpus

An optional second argument sets the documents per label (default 30),
which is handy for timing runs at full corpus size.
"""

import random
import sys
from pathlib import Path

SHARED = """
governo presidente ministro eleição eleições candidato candidatos deputado
deputados senado senador câmara congresso partido partidos política político
políticos brasil brasileiro brasileiros estado estados país cidade cidades
prefeito prefeitura projeto projetos lei leis votação votações reforma
economia dinheiro público pública recursos justiça tribunal juiz polícia
operação investigação denúncia denúncias empresa empresas trabalhadores
""".split()

FAKE = """
urgente compartilhe bomba absurdo escândalo vergonha mentira mentiras
verdade revelada revelou escondem esconde exposto chocante inacreditável
pasmem espalhem divulgue divulgou alerta golpe golpista comunistas
ditadura corrupto corruptos roubaram roubou ladrão ladrões farsa manipulação
mídia grande imprensa esconde ninguém viu vídeo áudio vazou vazado
""".split()

TRUE = """
segundo afirmou informou declarou divulgados dados pesquisa pesquisas
levantamento instituto ministério secretaria assessoria nota oficial
relatório relatórios orçamento aprovou aprovada aprovado sessão plenário
medida provisória parecer comissão comissões audiência reunião reuniões
anunciou previsão percentual crescimento índice trimestre fiscal
""".split()

SYLLABLES = "ba be bi bo bu ca ce ci co cu da de di do du fa fe fi fo ga go la le li lo lu ma me mi mo mu na ne ni no nu pa pe pi po pu ra re ri ro ru sa se si so ta te ti to tu va ve vi vo".split()
ENDINGS = "ção ções mente ando ado ada ados adas as os inho inha ista istas eiro eira ável idade ar er ir ou aram".split()

FILLER = "de o a que e do da em um para com não uma os no se na por mais as dos como mas ao".split()


def pseudo_words(rng, n):
    """Invented stems, each seen with several inflectional endings."""
    stems = sorted({"".join(rng.choice(SYLLABLES) for _ in range(rng.randint(2, 3))) for _ in range(n)})
    return [stem + rng.choice(ENDINGS) for stem in stems for _ in range(3)]


def sentence(rng, lean, bias, pseudo):
    words = []
    for _ in range(rng.randint(6, 14)):
        r = rng.random()
        if r < 0.25:
            words.append(rng.choice(FILLER))
        elif r < 0.55:
            words.append(rng.choice(pseudo))
        elif r < 0.55 + bias:
            words.append(rng.choice(lean))
        else:
            words.append(rng.choice(SHARED))
    if rng.random() < 0.3:
        words.insert(rng.randrange(len(words)), str(rng.randint(2, 2018)))
    words[0] = words[0].capitalize()
    end = rng.choice([".", ".", ".", "!", "?"] if lean is FAKE else [".", ".", ".", ";"])
    return " ".join(words) + end


def document(rng, lean, pseudo):
    n = rng.randint(3, 7) if lean is FAKE else rng.randint(5, 9)
    return " ".join(sentence(rng, lean, 0.12, pseudo) for _ in range(n)) + "\n"


def main(out, per_label=30):
    rng = random.Random(20180612)
    out = Path(out)
    pseudo = pseudo_words(rng, 400)
    for label, lean in (("fake", FAKE), ("true", TRUE)):
        d = out / label
        d.mkdir(parents=True, exist_ok=True)
        for i in range(1, per_label + 1):
            (d / f"{i}.txt").write_text(document(rng, lean, pseudo), encoding="utf-8")


if __name__ == "__main__":
    main(sys.argv[1], int(sys.argv[2]) if len(sys.argv) > 2 else 30)
