"""Regenerates the JSON fixtures under data/.

appendix/: the 108-language registry, the Ethnologue lexical table and the
embedding-similarity table for eight European languages.
demo/: an eight-language corpus plus synthetic 16-d embeddings in two
well-separated groups, used by the end-to-end CLI test.
"""
import json
import pathlib

import numpy as np

HERE = pathlib.Path(__file__).parent

FAMILIES = {
    "Germanic": "af als bar cy da de en fy gd is lb nds nl nn no sco sv yi",
    "Greek": "el",
    "Japonic": "ja",
    "Sino-Tibetan": "my wuu zh",
    "Turkic": "az kk ky tr tt ug uz",
    "Uralic": "et fi hu",
    "Austroasiatic": "km vi war",
    "Dravidian": "kn ml ta te",
    "Slavic": "be bg bs cs hr lt lv mk pl ru sh sk sl sr uk",
    "Kartvelian": "ka",
    "Niger-Congo": "sw",
    "Austronesian": "ceb id jv mg ms su tl",
    "Armenian": "hy",
    "Koreanic": "ko",
    "Albanian": "sq",
    "Tai-Kadai": "lo th",
    "Romance": "an ast br ca es fr gl it la oc pt ro scn eu",
    "Constructed": "eo ia",
    "Afro-Asiatic": "am ar arz he so",
    "Celtic": "ga",
    "Indo-Aryan": "as bn ckb fa gu hi ku mr ne or pa ps",
    "Mongolic": "mn sa sd si ur",
}

LANGS = ["ca", "en", "fr", "de", "pt", "ro", "ru", "es"]
LEXICAL = [
    [1.00, None, 0.85, None, 0.85, 0.73, None, 0.85],
    [None, 1.00, 0.27, 0.60, None, None, 0.24, None],
    [0.85, 0.27, 1.00, 0.28, 0.75, 0.75, None, 0.75],
    [None, 0.60, 0.28, 1.00, None, None, None, None],
    [0.85, None, 0.75, None, 1.00, 0.72, None, 0.88],
    [0.73, None, 0.75, None, 0.72, 1.00, 0.72, 0.71],
    [None, 0.24, None, None, None, 0.72, 1.00, None],
    [0.85, None, 0.75, None, 0.88, 0.71, None, 1.00],
]
EMBEDDING = [
    [1.00, 0.08, 0.76, 0.22, 0.63, 0.56, 0.23, 0.81],
    [0.08, 1.00, 0.26, 0.38, 0.28, 0.17, 0.31, 0.00],
    [0.76, 0.26, 1.00, 0.49, 0.63, 0.65, 0.47, 0.68],
    [0.22, 0.38, 0.49, 1.00, 0.47, 0.49, 0.59, 0.26],
    [0.63, 0.28, 0.63, 0.47, 1.00, 0.61, 0.45, 0.64],
    [0.56, 0.17, 0.65, 0.49, 0.61, 1.00, 0.48, 0.56],
    [0.23, 0.31, 0.47, 0.59, 0.45, 0.48, 1.00, 0.24],
    [0.81, 0.00, 0.68, 0.26, 0.64, 0.56, 0.24, 1.00],
]


def dump(path, doc):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(doc, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")


def appendix():
    records = sorted(
        ({"code": c, "family": fam, "syntax": {}} for fam, codes in FAMILIES.items() for c in codes.split()),
        key=lambda r: r["code"],
    )
    dump(HERE / "appendix/registry.json", {"v": 1, "families": sorted(FAMILIES), "languages": records})
    pairs = [
        {"a": LANGS[i], "b": LANGS[j], "sim": LEXICAL[i][j]}
        for i in range(8)
        for j in range(i + 1, 8)
        if LEXICAL[i][j] is not None
    ]
    dump(HERE / "appendix/lexical_similarity.json", {"v": 1, "pairs": pairs})
    dump(HERE / "appendix/embedding_similarity.json", {"v": 1, "languages": LANGS, "values": EMBEDDING})


DEMO_TEXT = {
    "ca": ["El gat dorm al sol.", "Avui plou molt a Barcelona.", "M'agrada llegir llibres."],
    "es": ["El gato duerme al sol.", "Hoy llueve mucho en Madrid.", "Me gusta leer libros."],
    "fr": ["Le chat dort au soleil.", "Il pleut beaucoup à Paris.", "J'aime lire des livres."],
    "pt": ["O gato dorme ao sol.", "Hoje chove muito em Lisboa.", "Eu gosto de ler livros."],
    "ro": ["Pisica doarme la soare.", "Astăzi plouă mult la București.", "Îmi place să citesc cărți."],
    "en": ["The cat sleeps in the sun.", "It rains a lot in London today.", "I like reading books."],
    "de": ["Die Katze schläft in der Sonne.", "Heute regnet es viel in Berlin.", "Ich lese gern Bücher."],
    "ru": ["Кошка спит на солнце.", "Сегодня в Москве идёт сильный дождь.", "Я люблю читать книги."],
}
DEMO_GROUPS = {"ca": 0, "es": 0, "fr": 0, "pt": 0, "ro": 0, "en": 1, "de": 1, "ru": 1}


def demo():
    rng = np.random.default_rng(20240601)
    dim = 16
    centers = np.zeros((2, dim))
    centers[0, :8] = 1.0
    centers[1, 8:] = 1.0
    lines = [json.dumps({"v": 1, "dim": dim})]
    for code, texts in DEMO_TEXT.items():
        corpus = HERE / "demo/corpus" / f"{code}.txt"
        corpus.parent.mkdir(parents=True, exist_ok=True)
        sentences = texts * 2
        corpus.write_text("\n".join(sentences) + "\n", encoding="utf-8")
        offset = rng.normal(0.0, 0.08, dim)
        for i in range(len(sentences)):
            vec = centers[DEMO_GROUPS[code]] + offset + rng.normal(0.0, 0.05, dim)
            lines.append(json.dumps({"lang": code, "id": i, "vec": [round(float(x), 6) for x in vec]}))
    (HERE / "demo/embeddings.jsonl").write_text("\n".join(lines) + "\n", encoding="utf-8")
    dump(
        HERE / "demo/config.json",
        {"corpus": "corpus", "embeddings": "embeddings.jsonl", "k": 2, "seed": 7, "cap": 100, "iterations": 300},
    )


if __name__ == "__main__":
    appendix()
    demo()
