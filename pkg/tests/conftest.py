"""Shared fixtures: the verse grammar and the bundled corpus."""

import pytest

from infolaws import Grammar, Ref, bundled_corpus

# Verse text with "_" rendered as a single space; no separator after the
# comma because the source grammar abuts "," and "if" directly.
VERSE = "How much wood would a woodchuck chuck,if a woodchuck could chuck wood?"


def verse_grammar() -> Grammar:
    """Five-rule grammar whose start symbol expands to VERSE.

    Rules follow the classic hand-built example: a set-phrase rule for
    " a woodchuck " plus word rules "chuck", "ould", "wood".
    """
    r1 = (
        tuple("How much ")
        + (Ref(4),)
        + tuple(" w")
        + (Ref(3), Ref(1), Ref(2), ",")
        + tuple("if")
        + (Ref(1), "c", Ref(3), " ", Ref(2), " ", Ref(4), "?")
    )
    r2 = tuple(" a ") + (Ref(4), Ref(2), " ")
    rules = (r1, r2, tuple("chuck"), tuple("ould"), tuple("wood"))
    return Grammar(rules=rules, alphabet=tuple(sorted(set(VERSE))))


@pytest.fixture(scope="session")
def verse():
    return verse_grammar()


@pytest.fixture(scope="session")
def corpus():
    return bundled_corpus()
