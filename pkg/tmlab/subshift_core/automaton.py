"""Suffix automaton over binary strings.

Online construction (one state per new character plus clones); each state
records the length of the longest string it accepts and its suffix link.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np


@dataclass(eq=False)
class Node:
    id: int
    length: int = 0
    link: Node | None = None
    transitions: dict[str, Node] = field(default_factory=dict)


def build(input_string: str) -> list[Node]:
    """Build the suffix automaton of ``input_string``; states are returned in id order."""
    root = Node(id=0)
    nodes = [root]
    current = root

    for character in input_string:
        last = current
        current = Node(id=len(nodes), length=last.length + 1)
        nodes.append(current)

        p = last
        while p is not None and character not in p.transitions:
            p.transitions[character] = current
            p = p.link

        if p is None:
            current.link = root
            continue

        q = p.transitions[character]
        if q.length == p.length + 1:
            current.link = q
            continue

        # replace() is shallow, so the transitions dict is copied explicitly
        clone = replace(
            q, id=len(nodes), length=p.length + 1, transitions=q.transitions.copy()
        )
        nodes.append(clone)
        current.link = clone
        q.link = clone

        while p is not None and p.transitions.get(character) is q:
            p.transitions[character] = clone
            p = p.link

    return nodes


@dataclass(frozen=True)
class SuffixAutomaton:
    """Array form of a suffix automaton; state 0 is the root, -1 means no edge."""

    next0: tuple[int, ...]
    next1: tuple[int, ...]
    length: tuple[int, ...]
    link: tuple[int, ...]

    @classmethod
    def from_string(cls, text: str) -> SuffixAutomaton:
        nodes = build(text)
        return cls(
            next0=tuple(n.transitions["0"].id if "0" in n.transitions else -1 for n in nodes),
            next1=tuple(n.transitions["1"].id if "1" in n.transitions else -1 for n in nodes),
            length=tuple(n.length for n in nodes),
            link=tuple(n.link.id if n.link is not None else -1 for n in nodes),
        )

    @property
    def size(self) -> int:
        return len(self.length)

    def step(self, state: int, symbol: str) -> int:
        return self.next0[state] if symbol == "0" else self.next1[state]

    def walk(self, word: str) -> int:
        """Length of the longest prefix of ``word`` accepted as a substring."""
        state = 0
        next0, next1 = self.next0, self.next1
        for i, symbol in enumerate(word):
            state = next0[state] if symbol == "0" else next1[state]
            if state < 0:
                return i
        return len(word)

    def counts_by_length(self, max_len: int) -> np.ndarray:
        """Number of distinct substrings of each length ``0..max_len``.

        A state with suffix link ``u`` accepts exactly the lengths
        ``length[u] + 1 .. length[state]``.
        """
        delta = np.zeros(max(self.length) + 2, dtype=np.int64)
        for state in range(1, self.size):
            delta[self.length[self.link[state]] + 1] += 1
            delta[self.length[state] + 1] -= 1
        counts = np.cumsum(delta)
        counts[0] = 1
        out = np.zeros(max_len + 1, dtype=np.int64)
        upto = min(max_len + 1, len(counts))
        out[:upto] = counts[:upto]
        return out
