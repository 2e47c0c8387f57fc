"""Reference entity-wise scorer, ported from the classic CoNLL shared-task
evaluation script's chunk accounting (startOfChunk/endOfChunk over B/I/O
tags). Used once to freeze expected values into tests/data/; it is
deliberately independent of the C++ span-extraction implementation.
"""


def _split(tag):
    if tag == "O":
        return "O", ""
    prefix, typ = tag.split("-", 1)
    return prefix, typ


def _end_of_chunk(prev_tag, tag, prev_type, typ):
    end = False
    if prev_tag == "B" and tag == "B":
        end = True
    if prev_tag == "B" and tag == "O":
        end = True
    if prev_tag == "I" and tag == "B":
        end = True
    if prev_tag == "I" and tag == "O":
        end = True
    if prev_tag != "O" and prev_type != typ:
        end = True
    return end


def _start_of_chunk(prev_tag, tag, prev_type, typ):
    start = False
    if tag == "B":
        start = True
    if prev_tag == "O" and tag == "I":
        start = True
    if tag != "O" and prev_type != typ:
        start = True
    return start


def _prf(gold, guessed, correct):
    p = correct / guessed if guessed else 0.0
    r = correct / gold if gold else 0.0
    f = 2 * p * r / (p + r) if p + r else 0.0
    return p, r, f


def score(sentences):
    """sentences: list of list of (gold_tag, guessed_tag) pairs.

    Returns (overall, by_type) where overall is a dict with found_correct,
    found_guessed, correct_chunks, precision, recall, f1 and by_type maps
    entity type to the same shape.
    """
    correct_chunks = {}
    found_correct = {}
    found_guessed = {}

    for sentence in sentences:
        in_correct = False
        last_correct, last_correct_type = "O", ""
        last_guessed, last_guessed_type = "O", ""
        # a virtual trailing O token closes any open chunks
        padded = list(sentence) + [("O", "O")]
        for gold_tag, guessed_tag in padded:
            correct_prefix, correct_type = _split(gold_tag)
            guessed_prefix, guessed_type = _split(guessed_tag)

            if in_correct:
                if (
                    _end_of_chunk(last_correct, correct_prefix, last_correct_type, correct_type)
                    and _end_of_chunk(last_guessed, guessed_prefix, last_guessed_type, guessed_type)
                    and last_guessed_type == last_correct_type
                ):
                    in_correct = False
                    correct_chunks[last_correct_type] = correct_chunks.get(last_correct_type, 0) + 1
                elif (
                    _end_of_chunk(last_correct, correct_prefix, last_correct_type, correct_type)
                    != _end_of_chunk(last_guessed, guessed_prefix, last_guessed_type, guessed_type)
                    or guessed_type != correct_type
                ):
                    in_correct = False

            if (
                _start_of_chunk(last_correct, correct_prefix, last_correct_type, correct_type)
                and _start_of_chunk(last_guessed, guessed_prefix, last_guessed_type, guessed_type)
                and guessed_type == correct_type
            ):
                in_correct = True

            if _start_of_chunk(last_correct, correct_prefix, last_correct_type, correct_type):
                found_correct[correct_type] = found_correct.get(correct_type, 0) + 1
            if _start_of_chunk(last_guessed, guessed_prefix, last_guessed_type, guessed_type):
                found_guessed[guessed_type] = found_guessed.get(guessed_type, 0) + 1

            last_correct, last_correct_type = correct_prefix, correct_type
            last_guessed, last_guessed_type = guessed_prefix, guessed_type

    types = sorted(set(found_correct) | set(found_guessed) | set(correct_chunks))
    by_type = {}
    for typ in types:
        g = found_correct.get(typ, 0)
        u = found_guessed.get(typ, 0)
        c = correct_chunks.get(typ, 0)
        p, r, f = _prf(g, u, c)
        by_type[typ] = dict(gold=g, guessed=u, correct=c, precision=p, recall=r, f1=f)

    total_gold = sum(found_correct.values())
    total_guessed = sum(found_guessed.values())
    total_correct = sum(correct_chunks.values())
    p, r, f = _prf(total_gold, total_guessed, total_correct)
    overall = dict(
        gold=total_gold,
        guessed=total_guessed,
        correct=total_correct,
        precision=p,
        recall=r,
        f1=f,
    )
    return overall, by_type


def iob1_to_bio(tags):
    out = list(tags)
    prev = "O"
    for i, tag in enumerate(tags):
        if tag.startswith("I-"):
            if prev == "O" or _split(prev)[1] != _split(tag)[1]:
                out[i] = "B" + tag[1:]
        prev = tag
    return out
