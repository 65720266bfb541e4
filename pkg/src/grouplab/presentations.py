"""Finitely presented groups: word grammar and coset enumeration.

Word grammar (documented contract for catalog files):

    presentation := names '|' relations
    names        := name (',' name)*
    relations    := relation ((';' | ',') relation)*   -- split at depth 0
    relation     := word ('=' word)*                   -- w1=..=wn gives wi*wn^-1
    word         := '1' | term+
    term         := atom ('^' integer)?
    atom         := name | '(' word ')' | '[' word ',' word ']'

Juxtaposition (optionally '*') is the product, `[x,y]` is x^-1 y^-1 x y,
and `1` is the empty word.  Words are stored as tuples of column codes:
generator i occupies column 2i, its inverse column 2i+1.

Enumeration is HLT-style: relators are scanned with gap filling at every
live coset, coincidences are processed through a union-find queue with path
compression, and the table is compacted only once it closes.  A hard cap on
allocated rows turns non-terminating inputs into a clean resource error.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .caps import Caps, DEFAULT_CAPS
from .errors import InputError, ResourceLimitError
from .groups import GroupHandle, build_group
from .perms import Perm

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_TOKEN_RE = re.compile(r"\s*([A-Za-z_][A-Za-z0-9_]*|-?\d+|[\^()\[\],;=|*])")

Word = tuple[int, ...]  # column codes: 2i = generator i, 2i+1 = its inverse


def _invert_word(word: Word) -> Word:
    return tuple(code ^ 1 for code in reversed(word))


def _tokenize(text: str) -> list[str]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            if text[pos:].strip():
                raise InputError(f"unexpected character at position {pos}: {text[pos:pos + 10]!r}")
            break
        tokens.append(m.group(1))
        pos = m.end()
    return tokens


class _WordParser:
    def __init__(self, tokens: list[str], gen_index: dict[str, int], text: str):
        self.tokens = tokens
        self.pos = 0
        self.gen_index = gen_index
        self.text = text

    def error(self, message: str):
        raise InputError(f"{message} (at token {self.pos} of {self.text!r})")

    def peek(self) -> str | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> str:
        tok = self.peek()
        if tok is None:
            self.error("unexpected end of word")
        self.pos += 1
        return tok

    def parse_word(self, stop: tuple[str, ...]) -> Word:
        letters: list[int] = []
        saw_atom = False
        while True:
            tok = self.peek()
            if tok is None or tok in stop:
                break
            if tok == "*":
                self.take()
                continue
            if tok == "1":
                self.take()
                saw_atom = True
                continue
            letters.extend(self.parse_term())
            saw_atom = True
        if not saw_atom:
            self.error("empty word")
        return tuple(letters)

    def parse_term(self) -> Word:
        tok = self.peek()
        prefix: Word = ()
        if (
            tok is not None
            and _NAME_RE.fullmatch(tok)
            and tok not in self.gen_index
            and len(tok) > 1
            and all(c in self.gen_index for c in tok)
        ):
            # juxtaposed single-letter generators like 'bd'; a trailing
            # exponent binds to the last letter only
            self.take()
            prefix = tuple(2 * self.gen_index[c] for c in tok[:-1])
            atom: Word = (2 * self.gen_index[tok[-1]],)
        else:
            atom = self.parse_atom()
        if self.peek() == "^":
            self.take()
            tok = self.take()
            try:
                power = int(tok)
            except ValueError:
                self.error(f"expected integer exponent, got {tok!r}")
        else:
            power = 1
        if power < 0:
            atom = _invert_word(atom)
            power = -power
        return prefix + atom * power

    def parse_atom(self) -> Word:
        tok = self.take()
        if tok == "(":
            word = self.parse_word(stop=(")",))
            if self.take() != ")":
                self.error("unbalanced parenthesis")
            return word
        if tok == "[":
            left = self.parse_word(stop=(",",))
            if self.take() != ",":
                self.error("expected ',' inside commutator")
            right = self.parse_word(stop=("]",))
            if self.take() != "]":
                self.error("unbalanced commutator bracket")
            return _invert_word(left) + _invert_word(right) + left + right
        if _NAME_RE.fullmatch(tok):
            idx = self.gen_index.get(tok)
            if idx is None:
                self.error(f"unknown generator {tok!r}")
            return (2 * idx,)
        self.error(f"unexpected token {tok!r}")


@dataclass(frozen=True)
class Presentation:
    """Generator names plus relator words (each relator equals the identity)."""

    generator_names: tuple[str, ...]
    relators: tuple[Word, ...]

    def __post_init__(self):
        if len(set(self.generator_names)) != len(self.generator_names):
            raise InputError("duplicate generator name in presentation")
        n_cols = 2 * len(self.generator_names)
        for word in self.relators:
            for code in word:
                if not (0 <= code < n_cols):
                    raise InputError("relator mentions an undeclared generator")

    @property
    def rank(self) -> int:
        return len(self.generator_names)

    def word_text(self, word: Word) -> str:
        if not word:
            return "1"
        parts = []
        i = 0
        while i < len(word):
            code = word[i]
            run = 1
            while i + run < len(word) and word[i + run] == code:
                run += 1
            name = self.generator_names[code // 2]
            sign = -1 if code & 1 else 1
            exponent = sign * run
            parts.append(name if exponent == 1 else f"{name}^{exponent}")
            i += run
        return " ".join(parts)

    def text(self) -> str:
        rels = "; ".join(self.word_text(w) for w in self.relators)
        return f"{', '.join(self.generator_names)} | {rels}"

    def parse_word(self, text: str) -> Word:
        gen_index = {name: i for i, name in enumerate(self.generator_names)}
        parser = _WordParser(_tokenize(text), gen_index, text)
        word = parser.parse_word(stop=())
        if parser.peek() is not None:
            parser.error("trailing tokens after word")
        return word


def parse_presentation(text: str) -> Presentation:
    """Parse the documented presentation grammar; round-trips through text()."""
    if "|" not in text:
        raise InputError("presentation needs a '|' between generators and relations")
    left, right = text.split("|", 1)
    names = [part.strip() for part in left.split(",")]
    for name in names:
        if not _NAME_RE.fullmatch(name or ""):
            raise InputError(f"bad generator name {name!r}")
    gen_index = {name: i for i, name in enumerate(names)}

    tokens = _tokenize(right)
    relators: list[Word] = []
    parser = _WordParser(tokens, gen_index, right)
    while parser.peek() is not None:
        sides = [parser.parse_word(stop=(";", ",", "="))]
        while parser.peek() == "=":
            parser.take()
            sides.append(parser.parse_word(stop=(";", ",", "=")))
        if parser.peek() in (";", ","):
            parser.take()
        last = sides[-1]
        if len(sides) == 1:
            relators.append(sides[0])
        else:
            for side in sides[:-1]:
                relators.append(side + _invert_word(last))
    if not relators:
        raise InputError("presentation has no relators")
    return Presentation(tuple(names), tuple(relators))


@dataclass
class CosetTable:
    """Closed coset table: a permutation action of each generator on cosets."""

    presentation: Presentation
    index: int
    rows: list[list[int]] = field(repr=False)  # entries are live coset numbers
    status: str = "closed"

    def generator_permutations(self) -> list[Perm]:
        perms = []
        for g in range(self.presentation.rank):
            perms.append(Perm([self.rows[i][2 * g] for i in range(self.index)]))
        return perms

    def group(self, label: str | None = None) -> GroupHandle:
        perms = self.generator_permutations()
        return build_group(
            perms,
            degree=self.index,
            label=label,
            meta={"presentation": self.presentation.text()},
        )


def coset_enumerate(
    presentation: Presentation,
    subgroup_words: list[Word] | None = None,
    caps: Caps = DEFAULT_CAPS,
) -> CosetTable:
    """Enumerate cosets of the subgroup generated by `subgroup_words`.

    With the trivial subgroup the induced action is the regular representation
    and the coset count is the group order.  Raises ResourceLimitError when
    more than caps.coset_rows rows would be allocated; enumeration of a
    presentation with infinite index never terminates on its own, the cap is
    what makes that failure explicit.
    """
    n_cols = 2 * presentation.rank
    cap = caps.coset_rows
    table: list[list[int | None]] = [[None] * n_cols]
    parent = [0]  # union-find; parent[i] <= i, roots are live cosets
    mutations = 0  # defines + merges, for the closure fixpoint test

    def rep(k: int) -> int:
        root = k
        while parent[root] != root:
            root = parent[root]
        while parent[k] != root:
            parent[k], k = root, parent[k]
        return root

    def define(alpha: int, col: int) -> int:
        nonlocal mutations
        if len(table) >= cap:
            raise ResourceLimitError("coset_rows", cap, len(table) + 1)
        beta = len(table)
        table.append([None] * n_cols)
        parent.append(beta)
        table[alpha][col] = beta
        table[beta][col ^ 1] = alpha
        mutations += 1
        return beta

    def merge(a: int, b: int, queue: list[int]) -> None:
        nonlocal mutations
        a, b = rep(a), rep(b)
        if a == b:
            return
        lo, hi = (a, b) if a < b else (b, a)
        parent[hi] = lo
        queue.append(hi)
        mutations += 1

    def coincidence(a: int, b: int) -> None:
        queue: list[int] = []
        merge(a, b, queue)
        head = 0
        while head < len(queue):
            gamma = queue[head]
            head += 1
            for col in range(n_cols):
                delta = table[gamma][col]
                if delta is None:
                    continue
                table[delta][col ^ 1] = None
                mu, nu = rep(gamma), rep(delta)
                if table[mu][col] is not None:
                    merge(nu, table[mu][col], queue)
                elif table[nu][col ^ 1] is not None:
                    merge(mu, table[nu][col ^ 1], queue)
                else:
                    table[mu][col] = nu
                    table[nu][col ^ 1] = mu

    def scan_and_fill(alpha: int, word: Word) -> None:
        f, i = alpha, 0
        b, j = alpha, len(word) - 1
        while True:
            while i <= j and table[f][word[i]] is not None:
                f = table[f][word[i]]
                i += 1
            if i > j:
                if f != b:
                    coincidence(f, b)
                return
            while j >= i and table[b][word[j] ^ 1] is not None:
                b = table[b][word[j] ^ 1]
                j -= 1
            if j < i:
                coincidence(f, b)
                return
            if j == i:
                table[f][word[i]] = b
                table[b][word[i] ^ 1] = f
                return
            define(f, word[i])

    for word in subgroup_words or []:
        scan_and_fill(0, word)
        if rep(0) != 0:
            raise RuntimeError("coset 0 lost live status")

    # Passes over live cosets until a pass neither defines nor merges;
    # coincidences can poke holes into rows scanned earlier, hence the loop.
    # A quiet pass implies the table is complete (no holes were filled) and
    # every relator scans closed at every live coset.
    while True:
        before = mutations
        alpha = 0
        while alpha < len(table):
            if rep(alpha) != alpha:
                alpha += 1
                continue
            for word in presentation.relators:
                scan_and_fill(alpha, word)
                if rep(alpha) != alpha:
                    break
            if rep(alpha) == alpha:
                for col in range(n_cols):
                    if table[alpha][col] is None:
                        define(alpha, col)
            alpha += 1
        if mutations == before:
            break

    live = [i for i in range(len(table)) if rep(i) == i]
    renumber = {old: new for new, old in enumerate(live)}
    rows = [[renumber[rep(table[old][col])] for col in range(n_cols)] for old in live]
    return CosetTable(presentation, len(live), rows)
