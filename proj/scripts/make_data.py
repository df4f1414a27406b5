#!/usr/bin/env python3
"""Regenerate the bundled synthetic corpora, embedding stores, and experiment
specs under data/. Deterministic; safe to rerun."""

import os

import numpy as np

ROOT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "data")

DIM = 16

ANIMATE = [
    "lion", "tiger", "eagle", "wolf", "horse", "otter", "falcon", "rabbit",
    "badger", "heron", "viper", "bison", "lynx", "stork",
]
INANIMATE = [
    "table", "stone", "bottle", "ladder", "anvil", "kettle", "mirror", "barrel",
    "hammer", "basket", "candle", "shovel", "plank", "bucket",
]

CONCRETE = [
    "pebble", "spoon", "fence", "wagon", "brick", "ribbon", "lantern", "saddle",
    "needle", "crate", "chisel", "goblet",
]
ABSTRACT = [
    "mercy", "doubt", "pride", "blame", "fate", "whim", "zeal", "grief",
    "honor", "spite", "awe", "bliss",
]

LONGISH = ["rope", "snake", "river", "pencil", "ruler", "thread", "pole", "eel",
           "chopstick", "lace", "spear", "cane", "wand", "stick", "hose", "noodle"]
FLATTISH = ["sheet", "card", "leaf", "plate", "rug", "tile", "coin", "page",
            "blanket", "board", "stamp", "mat", "disc", "tray", "panel", "towel"]

LW_DIM = 32


def write_store(path, words, matrix):
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(f"{len(words)} {matrix.shape[1]}\n")
        for w, row in zip(words, matrix):
            f.write(w + " " + " ".join(f"{x:.9g}" for x in row) + "\n")


def cluster_vectors(rng, center, n, noise):
    return center[None, :] + noise * rng.standard_normal((n, len(center)))


def two_topic_corpus():
    rng = np.random.default_rng(101)
    a_words = [f"a{i}" for i in range(1, 6)]
    b_words = [f"b{i}" for i in range(1, 6)]
    lines = []
    for _ in range(200):
        lines.append(" ".join(rng.choice(a_words, size=10)))
        lines.append(" ".join(rng.choice(b_words, size=10)))
    with open(os.path.join(ROOT, "corpora", "two_topic.txt"), "w", newline="\n") as f:
        f.write("\n".join(lines) + "\n")


def animacy():
    rng = np.random.default_rng(202)
    c_anim = rng.standard_normal(DIM)
    c_inan = rng.standard_normal(DIM)
    c_inan -= c_anim * (c_anim @ c_inan) / (c_anim @ c_anim)  # orthogonalize
    c_anim /= np.linalg.norm(c_anim)
    c_inan /= np.linalg.norm(c_inan)
    va = cluster_vectors(rng, c_anim, len(ANIMATE), 0.15)
    vi = cluster_vectors(rng, c_inan, len(INANIMATE), 0.15)
    words = ANIMATE + INANIMATE
    write_store(os.path.join(ROOT, "embeddings", "animacy.vec"),
                words, np.vstack([va, vi]))

    train_anim, test_anim = ANIMATE[:8], ANIMATE[8:]
    train_inan, test_inan = INANIMATE[:8], INANIMATE[8:]
    lines = ["# Williams (2005)-style animacy system, synthetic cluster geometry",
             "[novel_words]", "gi", "ro", "ul", "ne", "", "[training]"]
    for i, w in enumerate(train_anim):
        lines.append(f"{w}\t{'gi' if i % 2 == 0 else 'ul'}")
    for i, w in enumerate(train_inan):
        lines.append(f"{w}\t{'ro' if i % 2 == 0 else 'ne'}")
    lines += ["", "[test]"]
    for w in test_anim:
        for d in ["gi", "ul"]:
            lines.append(f"{w}\t{d}\tgrammatical")
        for d in ["ro", "ne"]:
            lines.append(f"{w}\t{d}\tungrammatical")
    for w in test_inan:
        for d in ["ro", "ne"]:
            lines.append(f"{w}\t{d}\tgrammatical")
        for d in ["gi", "ul"]:
            lines.append(f"{w}\t{d}\tungrammatical")
    lines += ["", "[hyper]", "eta = 0.01", "gamma = 0.01", "hidden = 100",
              "epochs = 150", "seed = 7"]
    with open(os.path.join(ROOT, "specs", "animacy.spec"), "w", newline="\n") as f:
        f.write("\n".join(lines) + "\n")


def pw_similarity():
    rng = np.random.default_rng(303)
    c_conc = rng.standard_normal(DIM)
    c_abst = rng.standard_normal(DIM)
    c_abst -= c_conc * (c_conc @ c_abst) / (c_conc @ c_conc)
    c_conc /= np.linalg.norm(c_conc)
    c_abst /= np.linalg.norm(c_abst)

    train_conc, near_conc, far_conc = CONCRETE[:6], CONCRETE[6:9], CONCRETE[9:]
    train_abst, near_abst, far_abst = ABSTRACT[:6], ABSTRACT[6:9], ABSTRACT[9:]

    words, rows = [], []

    def add(names, center, toward, mix, noise):
        for w in names:
            v = (1 - mix) * center + mix * toward + noise * rng.standard_normal(DIM)
            words.append(w)
            rows.append(v)

    add(train_conc, c_conc, c_abst, 0.0, 0.12)
    add(train_abst, c_abst, c_conc, 0.0, 0.12)
    add(near_conc, c_conc, c_abst, 0.05, 0.12)   # high similarity to exemplars
    add(near_abst, c_abst, c_conc, 0.05, 0.12)
    add(far_conc, c_conc, c_abst, 0.42, 0.12)    # pulled toward the boundary
    add(far_abst, c_abst, c_conc, 0.42, 0.12)
    write_store(os.path.join(ROOT, "embeddings", "pw.vec"), words, np.vstack(rows))

    verbs = ["powter", "mouten", "gouble", "terpen"]  # powter/mouten concrete

    def spec_lines(test_conc, test_abst, label):
        lines = [f"# Paciorek & Williams (2015)-style {label} generalisation set",
                 "[novel_words]"] + verbs + ["", "[training]"]
        for i, w in enumerate(train_conc):
            lines.append(f"{w}\t{verbs[i % 2]}")
        for i, w in enumerate(train_abst):
            lines.append(f"{w}\t{verbs[2 + i % 2]}")
        lines += ["", "[test]"]
        for w in test_conc:
            for v in verbs[:2]:
                lines.append(f"{w}\t{v}\tgrammatical")
            for v in verbs[2:]:
                lines.append(f"{w}\t{v}\tungrammatical")
        for w in test_abst:
            for v in verbs[2:]:
                lines.append(f"{w}\t{v}\tgrammatical")
            for v in verbs[:2]:
                lines.append(f"{w}\t{v}\tungrammatical")
        lines += ["", "[hyper]", "eta = 0.01", "gamma = 0.01", "hidden = 100",
                  "epochs = 150", "seed = 11"]
        return lines

    with open(os.path.join(ROOT, "specs", "pw_near.spec"), "w", newline="\n") as f:
        f.write("\n".join(spec_lines(near_conc, near_abst, "near (expt 1)")) + "\n")
    with open(os.path.join(ROOT, "specs", "pw_far.spec"), "w", newline="\n") as f:
        f.write("\n".join(spec_lines(far_conc, far_abst, "far (expt 4)")) + "\n")


def lw_contrast():
    rng = np.random.default_rng(404)
    feature = rng.standard_normal(LW_DIM)
    feature /= np.linalg.norm(feature)

    train_long, test_long = LONGISH[:10], LONGISH[10:]
    train_flat, test_flat = FLATTISH[:10], FLATTISH[10:]

    n_train = len(train_long) + len(train_flat)
    train_base = 0.25 * rng.standard_normal((n_train, LW_DIM))
    # test-noun noise lives outside span(feature, training noise): only the
    # long/flat feature itself can carry generalization signal
    basis, _ = np.linalg.qr(np.vstack([feature[None, :], train_base]).T)
    target_norm = 0.25 * np.sqrt(LW_DIM)
    test_base = []
    for _ in range(len(test_long) + len(test_flat)):
        v = rng.standard_normal(LW_DIM)
        v -= basis @ (basis.T @ v)
        test_base.append(v / np.linalg.norm(v) * target_norm)

    words_zh, words_en, rows = [], [], []

    def add(names, bases, sign):
        for w, base in zip(names, bases):
            rows.append(base + sign * 1.2 * feature)
            words_zh.append("zh_" + w)
            words_en.append(w)

    add(train_long, train_base[: len(train_long)], +1)
    add(train_flat, train_base[len(train_long):], -1)
    add(test_long, test_base[: len(test_long)], +1)
    add(test_flat, test_base[len(test_long):], -1)
    present = np.vstack(rows)
    ablated = present - np.outer(present @ feature, feature)  # feature projected out
    write_store(os.path.join(ROOT, "embeddings", "lw_zh.vec"), words_zh, present)
    write_store(os.path.join(ROOT, "embeddings", "lw_en.vec"), words_en, ablated)
    lines = ["# Leung & Williams (2014) expt 3-style long/flat system,",
             "# dual surface forms: Chinese-corpus store vs English-corpus store",
             "[novel_words]", "gi", "ro", "", "[training]"]
    for w in train_long:
        lines.append(f"zh_{w}\t{w}\tgi")
    for w in train_flat:
        lines.append(f"zh_{w}\t{w}\tro")
    lines += ["", "[test]"]
    for w in test_long:
        lines.append(f"zh_{w}\t{w}\tgi\tgrammatical")
        lines.append(f"zh_{w}\t{w}\tro\tungrammatical")
    for w in test_flat:
        lines.append(f"zh_{w}\t{w}\tro\tgrammatical")
        lines.append(f"zh_{w}\t{w}\tgi\tungrammatical")
    lines += ["", "[hyper]", "eta = 0.01", "gamma = 0.05", "hidden = 100",
              "epochs = 150", "seed = 13", "complement = true"]
    with open(os.path.join(ROOT, "specs", "lw.spec"), "w", newline="\n") as f:
        f.write("\n".join(lines) + "\n")


def main():
    for sub in ["corpora", "embeddings", "specs"]:
        os.makedirs(os.path.join(ROOT, sub), exist_ok=True)
    two_topic_corpus()
    animacy()
    pw_similarity()
    lw_contrast()
    print("wrote data/ bundles")


if __name__ == "__main__":
    main()
