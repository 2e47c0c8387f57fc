"""Generates tests/data/scorer_fixtures.txt: randomized gold/predicted tag
fixtures with expected entity-wise scores computed by the reference scorer
in conlleval_ref.py. Run once; the output is committed so the C++ tests
never depend on Python.

Includes a second, structurally different checker (direct span extraction
with repair) that must agree with the reference before a fixture is
emitted.

Usage: python3 gen_scorer_fixtures.py > ../data/scorer_fixtures.txt
"""

import random

import conlleval_ref as ref

TYPES = ["PER", "LOC", "ORG", "MISC"]


def spans_with_repair(tags):
    repaired = []
    prev = "O"
    for tag in tags:
        if tag.startswith("I-") and (prev == "O" or prev[2:] != tag[2:]):
            repaired.append("B" + tag[1:])
        else:
            repaired.append(tag)
        prev = tag
    spans = set()
    start = None
    typ = None
    for i, tag in enumerate(repaired + ["O"]):
        if start is not None and (tag == "O" or tag.startswith("B-") or tag[2:] != typ):
            spans.add((start, i, typ))
            start = None
        if tag.startswith("B-"):
            start, typ = i, tag[2:]
    return spans


def cross_check(sentences):
    gold_spans, pred_spans = [], []
    for sent in sentences:
        gold = [g for g, _ in sent]
        pred = [p for _, p in sent]
        gold_spans.append(spans_with_repair(gold))
        pred_spans.append(spans_with_repair(pred))
    total_gold = sum(len(s) for s in gold_spans)
    total_pred = sum(len(s) for s in pred_spans)
    total_correct = sum(len(g & p) for g, p in zip(gold_spans, pred_spans))
    return total_gold, total_pred, total_correct


def random_sentence_tags(rng):
    length = rng.randint(1, 12)
    tags = []
    i = 0
    while i < length:
        if rng.random() < 0.5:
            tags.append("O")
            i += 1
        else:
            typ = rng.choice(TYPES)
            span = min(length - i, rng.randint(1, 3))
            for j in range(span):
                tags.append(("B-" if j == 0 else "I-") + typ)
            i += span
    return tags


def to_iob1(tags):
    """Rewrites BIO to IOB1: B- becomes I- unless needed to split adjacent
    same-type entities."""
    out = []
    prev = "O"
    for tag in tags:
        if tag.startswith("B-"):
            if prev != "O" and prev[2:] == tag[2:]:
                out.append(tag)  # separator B stays
            else:
                out.append("I" + tag[1:])
        else:
            out.append(tag)
        prev = tag
    return out


def perturb(rng, tags):
    """Random prediction: mostly gold with random mutations, sometimes
    sloppy (stray I- tags)."""
    pred = list(tags)
    for i in range(len(pred)):
        r = rng.random()
        if r < 0.12:
            pred[i] = "O"
        elif r < 0.2:
            typ = rng.choice(TYPES)
            pred[i] = rng.choice(["B-", "I-"]) + typ  # may be sloppy
        elif r < 0.26 and pred[i] != "O":
            pred[i] = ("I-" if pred[i].startswith("B-") else "B-") + pred[i][2:]
    return pred


def emit_fixture(fid, sentences, out):
    pairs = [list(zip(g, p)) for g, p in sentences]
    overall, by_type = ref.score(pairs)

    g, u, c = cross_check(pairs)
    assert (g, u, c) == (overall["gold"], overall["guessed"], overall["correct"]), (
        fid,
        (g, u, c),
        overall,
    )

    out.append(f"fixture {fid}")
    for gold, pred in sentences:
        out.append(f"sentence {len(gold)}")
        out.append("gold " + " ".join(gold))
        out.append("pred " + " ".join(pred))
    out.append(
        "expect_counts %d %d %d" % (overall["gold"], overall["guessed"], overall["correct"])
    )
    out.append(
        "expect_overall %.4f %.4f %.4f"
        % (overall["precision"], overall["recall"], overall["f1"])
    )
    for typ, row in sorted(by_type.items()):
        out.append(
            "expect_type %s %d %d %d %.4f %.4f %.4f"
            % (typ, row["gold"], row["guessed"], row["correct"], row["precision"], row["recall"], row["f1"])
        )
    out.append("end")


def main():
    rng = random.Random(20240811)
    out = []

    fid = 0
    # randomized BIO fixtures with perturbed predictions
    for _ in range(14):
        n_sentences = rng.randint(1, 6)
        sentences = []
        for _ in range(n_sentences):
            gold = random_sentence_tags(rng)
            pred = perturb(rng, gold)
            sentences.append((gold, pred))
        emit_fixture(fid, sentences, out)
        fid += 1

    # IOB1-converted gold fixtures: gold generated as BIO, rewritten to
    # IOB1, converted back through the reference converter; predictions
    # perturbed from the converted form. Exercises adjacent same-type
    # entities surviving the round trip.
    for _ in range(6):
        n_sentences = rng.randint(1, 5)
        sentences = []
        for _ in range(n_sentences):
            gold_bio = random_sentence_tags(rng)
            converted = ref.iob1_to_bio(to_iob1(gold_bio))
            assert converted == gold_bio, (gold_bio, converted)
            sentences.append((converted, perturb(rng, converted)))
        emit_fixture(fid, sentences, out)
        fid += 1

    # hand cases: whole-sentence O, everything wrong, sloppy I-run
    emit_fixture(fid, [(["O", "O", "O"], ["O", "B-PER", "O"])], out)
    fid += 1
    emit_fixture(
        fid,
        [(["B-ORG", "I-ORG", "O"], ["B-ORG", "O", "O"])],  # partial span counts zero
        out,
    )
    fid += 1
    emit_fixture(
        fid,
        [(["O", "B-LOC", "I-LOC"], ["I-LOC", "I-LOC", "I-LOC"])],  # stray I- repair
        out,
    )
    fid += 1

    print("\n".join(out))


if __name__ == "__main__":
    main()
