"""Admissible grammars and the two grammar transforms.

A grammar here is an ordered list of production rules, one per
nonterminal, whose right-hand sides may reference only nonterminals
that appear later in the list.  Such a grammar generates exactly one
string.  Two transforms build grammars from strings:

* ``irreducible_transform``: an online digram-substitution pass followed
  by a reduction to irreducibility (no repeated digram, every secondary
  rule used at least twice, distinct expansions).
* ``minimal_transform``: a flat (terminal-only secondary rules) grammar
  chosen by hill-climbing on ``encoded_length``, the bit size of the
  declared reversible fixed-width serialization.

Terminals may be characters or any hashable symbols; nonterminal
references are wrapped in :class:`Ref`.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Hashable, NamedTuple, Sequence

import numpy as np


class Ref(NamedTuple):
    """Reference to the rule at the given 0-based index (A_{index+1})."""

    index: int


@dataclass(frozen=True)
class Grammar:
    """Ordered context-free grammar generating a single string."""

    rules: tuple
    alphabet: tuple

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(tuple(r) for r in self.rules))
        object.__setattr__(self, "alphabet", tuple(self.alphabet))

    @property
    def n_rules(self) -> int:
        return len(self.rules)


def validate_grammar(g: Grammar) -> None:
    """Raise ValueError unless references flow strictly forward and
    terminals belong to the declared alphabet."""
    if not g.rules:
        raise ValueError("grammar needs at least one rule")
    alpha = set(g.alphabet)
    for i, rhs in enumerate(g.rules):
        for sym in rhs:
            if isinstance(sym, Ref):
                if not i < sym.index < len(g.rules):
                    raise ValueError(
                        f"rule {i + 1} references A_{sym.index + 1}: "
                        "references must flow strictly forward"
                    )
            elif sym not in alpha:
                raise ValueError(f"rule {i + 1} uses terminal {sym!r} outside the alphabet")


def _expand_all(g: Grammar) -> list[tuple]:
    """Terminal expansions of every rule in one bottom-up pass."""
    memo: list = [None] * len(g.rules)
    for i in range(len(g.rules) - 1, -1, -1):
        out: list = []
        for sym in g.rules[i]:
            if isinstance(sym, Ref):
                out.extend(memo[sym.index])
            else:
                out.append(sym)
        memo[i] = tuple(out)
    return memo


def expand(g: Grammar, index: int = 0) -> tuple:
    """Terminal expansion of rule ``index`` as a tuple of terminals."""
    return _expand_all(g)[index]


def expand_text(g: Grammar, index: int = 0) -> str:
    """Expansion joined to a string (terminals must be strings)."""
    return "".join(expand(g, index))


def yk_length(g: Grammar) -> int:
    """Yang-Kieffer length: total symbol count of all right-hand sides."""
    return sum(len(r) for r in g.rules)


def vocab_size(g: Grammar) -> int:
    """Vocabulary size V(G): the number of nonterminals."""
    return len(g.rules)


def encoded_length(g: Grammar) -> int:
    """Bits of the reversible fixed-width serialization.

    Every symbol (and one end-of-rule marker per rule) takes
    ceil(log2(n_rules + |X| + 1)) bits.
    """
    width = max(1, math.ceil(math.log2(g.n_rules + len(g.alphabet) + 1)))
    return (yk_length(g) + g.n_rules) * width


def serialize_bits(g: Grammar) -> str:
    """Serialize to a '0'/'1' string; its length equals encoded_length.

    Code 0 is the end-of-rule marker, codes 1..|X| are terminals in
    alphabet order, and code |X|+1+j is the nonterminal A_{j+1}.
    """
    width = max(1, math.ceil(math.log2(g.n_rules + len(g.alphabet) + 1)))
    term_code = {t: 1 + i for i, t in enumerate(g.alphabet)}
    out = []
    for rhs in g.rules:
        for sym in rhs:
            code = 1 + len(g.alphabet) + sym.index if isinstance(sym, Ref) else term_code[sym]
            out.append(format(code, f"0{width}b"))
        out.append("0" * width)
    return "".join(out)


def deserialize_bits(bits: str, alphabet: Sequence, n_rules: int) -> Grammar:
    """Exact inverse of :func:`serialize_bits`."""
    alphabet = tuple(alphabet)
    width = max(1, math.ceil(math.log2(n_rules + len(alphabet) + 1)))
    if len(bits) % width:
        raise ValueError("bit length is not a multiple of the symbol width")
    rules: list[list] = [[]]
    for i in range(0, len(bits), width):
        code = int(bits[i : i + width], 2)
        if code == 0:
            rules.append([])
        elif code <= len(alphabet):
            rules[-1].append(alphabet[code - 1])
        else:
            rules[-1].append(Ref(code - len(alphabet) - 1))
    if rules[-1]:
        raise ValueError("serialization must end with an end-of-rule marker")
    rules.pop()
    if len(rules) != n_rules:
        raise ValueError(f"expected {n_rules} rules, found {len(rules)}")
    return Grammar(rules=tuple(tuple(r) for r in rules), alphabet=alphabet)


def extract_words(g: Grammar) -> list:
    """Terminal expansions of the secondary rules.

    Deduplicated, in order of first rule appearance.  Expansions join to
    strings when every terminal is a string.
    """
    seen = set()
    out = []
    joinable = all(isinstance(t, str) for t in g.alphabet)
    expansions = _expand_all(g)
    for i in range(1, len(g.rules)):
        word = "".join(expansions[i]) if joinable else expansions[i]
        if word not in seen:
            seen.add(word)
            out.append(word)
    return out


def format_grammar(g: Grammar) -> str:
    """Text format: one rule per line, 'A<i> -> <symbols>'.

    Runs of terminals are rendered as one double-quoted (JSON-escaped)
    string; nonterminals appear as A<i>.
    """
    import json

    lines = []
    for i, rhs in enumerate(g.rules):
        parts = []
        run: list[str] = []
        for sym in rhs:
            if isinstance(sym, Ref):
                if run:
                    parts.append(json.dumps("".join(run)))
                    run = []
                parts.append(f"A{sym.index + 1}")
            else:
                run.append(sym)
        if run:
            parts.append(json.dumps("".join(run)))
        lines.append(f"A{i + 1} -> " + " ".join(parts))
    return "\n".join(lines) + "\n"


def parse_grammar(text: str, alphabet: Sequence | None = None) -> Grammar:
    """Inverse of :func:`format_grammar` for string-terminal grammars."""
    import json
    import re

    token_re = re.compile(r'A(\d+)|("(?:[^"\\]|\\.)*")')
    rules = []
    terminals: set = set()
    for line in text.strip().splitlines():
        head, _, body = line.partition("->")
        if not head.strip().startswith("A"):
            raise ValueError(f"malformed rule line: {line!r}")
        rhs: list = []
        for m in token_re.finditer(body):
            if m.group(1) is not None:
                rhs.append(Ref(int(m.group(1)) - 1))
            else:
                for ch in json.loads(m.group(2)):
                    rhs.append(ch)
                    terminals.add(ch)
        rules.append(tuple(rhs))
    g = Grammar(rules=tuple(rules), alphabet=tuple(sorted(terminals)) if alphabet is None else tuple(alphabet))
    validate_grammar(g)
    return g


# ---------------------------------------------------------------------------
# irreducible transform: online digram substitution + reduction


class _Arena:
    """Doubly linked symbol list over growable int arrays."""

    def __init__(self, cap: int):
        self.sym = np.empty(cap, dtype=np.int64)
        self.nxt = np.full(cap, -1, dtype=np.int64)
        self.prv = np.full(cap, -1, dtype=np.int64)
        self.alive = np.zeros(cap, dtype=bool)
        self.free = 0

    def new(self, s: int) -> int:
        if self.free == len(self.sym):
            grow = len(self.sym)
            self.sym = np.concatenate([self.sym, np.empty(grow, dtype=np.int64)])
            self.nxt = np.concatenate([self.nxt, np.full(grow, -1, dtype=np.int64)])
            self.prv = np.concatenate([self.prv, np.full(grow, -1, dtype=np.int64)])
            self.alive = np.concatenate([self.alive, np.zeros(grow, dtype=bool)])
        i = self.free
        self.free += 1
        self.sym[i] = s
        self.nxt[i] = -1
        self.prv[i] = -1
        self.alive[i] = True
        return i


def _online_pass(seq: Sequence[int], next_id: int):
    """Left-to-right digram substitution.

    Maintains an index from digram to one occurrence; the second
    non-overlapping occurrence of a digram triggers a rule (or reuses
    the rule whose two-symbol body carries that digram).  Negative
    symbols act as inert separators: they are never indexed, so no
    digram spans them.  Returns the output sequence and the binary
    bodies of rules numbered from ``next_id``.
    """
    a = _Arena(2 * len(seq) + 16)
    index: dict[tuple[int, int], int] = {}
    body_rule: dict[int, int] = {}
    rules: dict[int, tuple[int, int]] = {}
    nid = next_id

    head = a.new(-1)
    tail = head
    stack: list[int] = []

    def unindex(p):
        q = a.nxt[p]
        if q >= 0 and a.alive[p] and a.alive[q]:
            d = (int(a.sym[p]), int(a.sym[q]))
            if index.get(d) == p:
                del index[d]

    def substitute(p, r):
        nonlocal tail
        q = a.nxt[p]
        left, right = a.prv[p], a.nxt[q]
        for node in (left, p, q):
            if node >= 0 and a.sym[node] >= 0:
                unindex(node)
        a.alive[p] = False
        a.alive[q] = False
        m = a.new(r)
        a.nxt[left] = m
        a.prv[m] = left
        if right >= 0:
            a.nxt[m] = right
            a.prv[right] = m
        else:
            tail = m
        if a.sym[left] >= 0:
            stack.append(left)
        stack.append(m)

    def check(p):
        nonlocal nid
        if not a.alive[p] or a.sym[p] < 0:
            return
        q = a.nxt[p]
        if q < 0 or not a.alive[q]:
            return
        d = (int(a.sym[p]), int(a.sym[q]))
        m = index.get(d)
        valid = (
            m is not None
            and a.alive[m]
            and a.nxt[m] >= 0
            and a.alive[a.nxt[m]]
            and (int(a.sym[m]), int(a.sym[a.nxt[m]])) == d
        )
        if not valid:
            index[d] = p
            return
        if m == p or a.nxt[m] == p or a.nxt[p] == m:
            return
        r = body_rule.get(m)
        if r is not None:
            substitute(p, r)
        else:
            r = nid
            nid += 1
            na = a.new(d[0])
            nb = a.new(d[1])
            a.nxt[na] = nb
            a.prv[nb] = na
            rules[r] = (na, nb)
            body_rule[na] = r
            index[d] = na
            substitute(m, r)
            substitute(p, r)

    for t in seq:
        node = a.new(int(t))
        a.nxt[tail] = node
        a.prv[node] = tail
        tail = node
        stack.append(int(a.prv[node]))
        while stack:
            check(stack.pop())

    top = []
    p = int(a.nxt[head])
    while p >= 0:
        top.append(int(a.sym[p]))
        p = int(a.nxt[p])
    bodies = {r: [int(a.sym[x]), int(a.sym[y])] for r, (x, y) in rules.items()}
    return top, bodies


def _nonoverlap_digrams(rows: list[list[int]]) -> Counter:
    """Non-overlapping digram counts across all right-hand sides."""
    counts: Counter = Counter()
    for row in rows:
        last: dict[tuple[int, int], int] = {}
        for i in range(len(row) - 1):
            d = (row[i], row[i + 1])
            if last.get(d, -2) == i - 1:
                last.pop(d)  # overlap: skip this occurrence
                continue
            last[d] = i
            counts[d] += 1
    return counts


def _replace_digram(row: list[int], d: tuple[int, int], nt: int) -> list[int]:
    out: list[int] = []
    i = 0
    while i < len(row):
        if i + 1 < len(row) and row[i] == d[0] and row[i + 1] == d[1]:
            out.append(nt)
            i += 2
        else:
            out.append(row[i])
            i += 1
    return out


def _int_expansions(bodies: dict[int, list[int]], n_term: int) -> dict[int, tuple[int, ...]]:
    """Terminal expansion of each rule, memoized without recursion."""
    memo: dict[int, tuple[int, ...]] = {}
    for root in bodies:
        stack = [root]
        while stack:
            cur = stack[-1]
            if cur in memo:
                stack.pop()
                continue
            deps = [s for s in bodies[cur] if s >= n_term and s not in memo]
            if deps:
                stack.extend(deps)
                continue
            out: list[int] = []
            for s in bodies[cur]:
                if s >= n_term:
                    out.extend(memo[s])
                else:
                    out.append(s)
            memo[cur] = tuple(out)
            stack.pop()
    return memo


def _reduce_to_irreducible(top: list[int], bodies: dict[int, list[int]], n_term: int, next_id: int):
    """Fixpoint of: drop unused rules, inline once-used rules, merge
    duplicate expansions, eliminate repeated digrams.

    Digram elimination reuses the arena pass over all right-hand sides
    joined by unique negative separators; if lazy index invalidation
    lets a repeat survive the pass, one explicit substitution keeps the
    iteration strictly progressing.
    """
    while True:
        changed = False
        while True:
            usage: Counter = Counter()
            for row in [top] + list(bodies.values()):
                for s in row:
                    if s >= n_term:
                        usage[s] += 1
            unused = [r for r in bodies if usage[r] == 0]
            for r in unused:
                del bodies[r]
            # a one-symbol body makes its rule a pure alias of that symbol
            units = {r: b[0] for r, b in bodies.items() if len(b) == 1}
            inline = {r for r in bodies if usage[r] == 1 and r not in units}
            if not unused and not units and not inline:
                break
            changed = True
            if units:

                def resolve(s: int) -> int:
                    while s in units:
                        s = units[s]
                    return s

                top = [resolve(s) for s in top]
                bodies = {
                    r: [resolve(s) for s in b] for r, b in bodies.items() if r not in units
                }
                continue
            if inline:

                def splice(row: list[int]) -> list[int]:
                    out: list[int] = []
                    for s in row:
                        if s in inline:
                            out.extend(splice(bodies[s]))
                        else:
                            out.append(s)
                    return out

                top = splice(top)
                bodies = {r: splice(b) for r, b in bodies.items() if r not in inline}
        # merge rules with identical expansions (keep the smallest id)
        exp = _int_expansions(bodies, n_term)
        by_exp: dict[tuple[int, ...], int] = {}
        alias: dict[int, int] = {}
        for r in sorted(bodies):
            if exp[r] in by_exp:
                alias[r] = by_exp[exp[r]]
            else:
                by_exp[exp[r]] = r
        if alias:
            changed = True
            top = [alias.get(s, s) for s in top]
            bodies = {
                r: [alias.get(s, s) for s in b] for r, b in bodies.items() if r not in alias
            }
        order = sorted(bodies)
        rows = [top] + [bodies[r] for r in order]
        counts = _nonoverlap_digrams(rows)
        if any(c >= 2 for c in counts.values()):
            changed = True
            joined: list[int] = []
            for i, row in enumerate(rows):
                if i:
                    joined.append(-i - 2)
                joined.extend(row)
            out, new_bodies = _online_pass(joined, next_id)
            parts: list[list[int]] = [[]]
            for s in out:
                if s < -1:
                    parts.append([])
                else:
                    parts[-1].append(s)
            if new_bodies:
                next_id = max(new_bodies) + 1
                top = parts[0]
                for r, body in zip(order, parts[1:]):
                    bodies[r] = body
                bodies.update(new_bodies)
            else:
                # the lazy pass made no progress; substitute one repeat exactly
                d = min(d for d, c in counts.items() if c >= 2)
                body_match = [r for r in order if bodies[r] == list(d)]
                nt = body_match[0] if body_match else next_id
                top = _replace_digram(top, d, nt)
                for r in order:
                    if r != nt:
                        bodies[r] = _replace_digram(bodies[r], d, nt)
                if nt not in bodies:
                    bodies[nt] = list(d)
                    next_id += 1
        if not changed:
            return top, bodies


def _to_grammar(top: list[int], bodies: dict[int, list[int]], terminals: Sequence, n_term: int) -> Grammar:
    """Renumber into forward-reference order (reverse DFS postorder)."""
    order: list[int] = []
    seen: set[int] = set()

    def dfs(row: list[int]):
        for s in row:
            if s >= n_term and s not in seen:
                seen.add(s)
                dfs(bodies[s])
                order.append(s)

    dfs(top)
    # reverse postorder: every rule precedes the rules it references
    position = {r: 1 + i for i, r in enumerate(reversed(order))}

    def convert(row: list[int]) -> tuple:
        return tuple(Ref(position[s]) if s >= n_term else terminals[s] for s in row)

    rules = [convert(top)]
    for r in reversed(order):
        rules.append(convert(bodies[r]))
    return Grammar(rules=tuple(rules), alphabet=tuple(terminals))


def irreducible_transform(w: Sequence[Hashable], alphabet: Sequence | None = None) -> Grammar:
    """Irreducible grammar for w via online digram substitution.

    The online pass keeps an index of seen digrams and factors each
    digram on its second non-overlapping occurrence; the reduction then
    inlines once-used rules, merges duplicate expansions, and removes
    any repeated digram the splicing reintroduced.
    """
    if len(w) == 0:
        raise ValueError("cannot transform the empty string")
    terminals = tuple(sorted(set(w))) if alphabet is None else tuple(alphabet)
    tmap = {t: i for i, t in enumerate(terminals)}
    seq = [tmap[s] for s in w]
    top, bodies = _online_pass(seq, len(terminals))
    top, bodies = _reduce_to_irreducible(top, bodies, len(terminals), max(bodies, default=len(terminals) - 1) + 1)
    return _to_grammar(top, bodies, terminals, len(terminals))


def is_irreducible(g: Grammar) -> bool:
    """Check the three irreducibility conditions."""
    rows = []
    for rhs in g.rules:
        rows.append([("R", s.index) if isinstance(s, Ref) else ("T", s) for s in rhs])
    # (a) no digram appears twice (non-overlapping occurrences)
    counts: Counter = Counter()
    for row in rows:
        last: dict = {}
        for i in range(len(row) - 1):
            d = (row[i], row[i + 1])
            if last.get(d, -2) == i - 1:
                last.pop(d)
                continue
            last[d] = i
            counts[d] += 1
    if any(c >= 2 for c in counts.values()):
        return False
    # (b) every secondary rule used at least twice
    usage = Counter(s.index for rhs in g.rules for s in rhs if isinstance(s, Ref))
    if any(usage[i] < 2 for i in range(1, len(g.rules))):
        return False
    # (c) distinct expansions
    expansions = _expand_all(g)
    return len(set(expansions)) == len(expansions)


# ---------------------------------------------------------------------------
# minimal transform: flat grammars by hill-climbing on encoded_length


def _enc_bits(total_syms: int, n_rules: int, n_term: int) -> int:
    width = max(1, math.ceil(math.log2(n_rules + n_term + 1)))
    return (total_syms + n_rules) * width


def _greedy_parse(w: str, phrases: Sequence[str]) -> list[str]:
    lens_by_first: dict[str, set[int]] = {}
    for p in phrases:
        lens_by_first.setdefault(p[0], set()).add(len(p))
    lens = {c: sorted(s, reverse=True) for c, s in lens_by_first.items()}
    pset = set(phrases)
    out: list[str] = []
    i, n = 0, len(w)
    while i < n:
        hit = None
        for L in lens.get(w[i], ()):
            if i + L <= n and w[i : i + L] in pset:
                hit = w[i : i + L]
                break
        if hit is None:
            out.append(w[i])
            i += 1
        else:
            out.append(hit)
            i += len(hit)
    return out


def _flat_cost(w: str, phrases: Sequence[str], n_term: int) -> tuple[int, list[str]]:
    """Exact encoded_length of the flat grammar; phrases the parse never
    uses are dropped before costing."""
    top = _greedy_parse(w, phrases)
    used_set = {t for t in top if len(t) > 1}
    used = [p for p in phrases if p in used_set]
    total = len(top) + sum(len(p) for p in used)
    return _enc_bits(total, 1 + len(used), n_term), used


def _substring_pool(w: str, max_len: int, pool: int) -> list[str]:
    counts: dict[str, int] = {}
    n = len(w)
    for L in range(2, max_len + 1):
        if L > n:
            break
        for i in range(n - L + 1):
            s = w[i : i + L]
            counts[s] = counts.get(s, 0) + 1
    scored = [(-(c - 1) * (len(s) - 1), -len(s), s) for s, c in counts.items() if c >= 2]
    scored.sort()
    return [s for _, _, s in scored[:pool]]


def _merge_pool(top: list[str], limit: int, max_len: int = 64) -> list[str]:
    adj: Counter = Counter()
    for x, y in zip(top, top[1:]):
        if 2 <= len(x) + len(y) <= max_len:
            adj[x + y] += 1
    scored = [(-(c - 1) * (len(s) - 1), -len(s), s) for s, c in adj.items() if c >= 2]
    scored.sort()
    return [s for _, _, s in scored[:limit]]


def _sweep(w, n_term, D, best, cands, batches):
    improved = False
    for s in [c for c in cands if c not in D]:
        cost, used = _flat_cost(w, D + [s], n_term)
        if cost < best:
            best, D, improved = cost, used, True
    for b in batches:
        fresh = [c for c in cands if c not in D]
        if len(fresh) < 2:
            break
        cost, used = _flat_cost(w, D + fresh[:b], n_term)
        if cost < best:
            best, D, improved = cost, used, True
    return D, best, improved


def _climb(w: str, n_term: int, spool: list[str], rounds: int, merge_limit: int, batches, merges_first: bool):
    best, D = _flat_cost(w, [], n_term)
    for _ in range(rounds):
        improved = False
        top = _greedy_parse(w, D)
        pools = [_merge_pool(top, merge_limit), spool]
        if not merges_first:
            pools.reverse()
        for cands in pools:
            D, best, imp = _sweep(w, n_term, D, best, cands, batches)
            improved |= imp
        for s in list(D):
            cost, used = _flat_cost(w, [p for p in D if p != s], n_term)
            if cost < best:
                best, D, improved = cost, used, True
        if not improved:
            break
    return D, best


def minimal_transform(w: Sequence, budget: int = 2, alphabet: Sequence | None = None) -> Grammar:
    """Flat grammar locally minimizing encoded_length.

    Candidate phrases come from two deterministic sources: the highest
    (occurrences - 1) * (length - 1) scoring substrings, and
    concatenations of adjacent tokens of the current parse.  Single and
    batched additions, removals, and parse-adjacent merges are accepted
    only when they strictly reduce encoded_length; batched additions let
    the search cross the cliffs of the fixed-width code.  Two move
    schedules (substring-pool first, merges first) are climbed and the
    cheaper result returned.  Deterministic given (w, budget).
    """
    if len(w) == 0:
        raise ValueError("cannot transform the empty string")
    joined = w if isinstance(w, str) else "".join(str(s) for s in w)
    terminals = tuple(sorted(set(joined))) if alphabet is None else tuple(alphabet)
    n_term = len(terminals)
    if len(joined) < 4:
        return Grammar(rules=(tuple(joined),), alphabet=terminals)
    effort = max(0, int(budget))
    pool = 48 * (effort + 1)
    if effort >= 3:
        pool = min(pool + int(3 * math.sqrt(len(joined))), 2048)
    merge_limit = 24 * (effort + 1)
    rounds = 2 * (effort + 1)
    batches = tuple(2**j for j in range(1, min(4 + effort, 10)))
    spool = _substring_pool(joined, max_len=20, pool=pool)
    d1, b1 = _climb(joined, n_term, spool, rounds, merge_limit, batches, merges_first=False)
    d2, b2 = _climb(joined, n_term, spool, rounds, merge_limit, batches, merges_first=True)
    D = d1 if b1 <= b2 else d2
    phrases = sorted(D, key=lambda p: (-len(p), p))
    ref_of = {p: Ref(1 + i) for i, p in enumerate(phrases)}
    top = tuple(ref_of.get(t, t) for t in _greedy_parse(joined, phrases))
    rules = [top] + [tuple(p) for p in phrases]
    return Grammar(rules=tuple(rules), alphabet=terminals)
