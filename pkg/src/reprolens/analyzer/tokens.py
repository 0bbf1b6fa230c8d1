"""Tokenizer for the Java subset understood by the structural parser.

One deliberate quirk: ``>`` is always emitted as a single-character token so
the parser can close nested generic argument lists; shift and
greater-or-equal operators are reassembled from adjacent ``>`` tokens at
parse time (the same trick javac uses).
"""

from __future__ import annotations

from dataclasses import dataclass

KEYWORDS = frozenset(
    """abstract assert boolean break byte case catch char class const continue
    default do double else enum extends final finally float for goto if
    implements import instanceof int interface long native new package private
    protected public return short static strictfp super switch synchronized
    this throw throws transient try void volatile while true false null""".split()
)

PRIMITIVES = frozenset("boolean byte char short int long float double".split())

MODIFIERS = frozenset(
    "public private protected static final abstract native synchronized"
    " transient volatile strictfp default".split()
)

# longest-match table; nothing here may start with '>'
_PUNCT3 = ("<<=", "...")
_PUNCT2 = ("->", "::", "++", "--", "&&", "||", "==", "!=", "<=",
           "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<")
_PUNCT1 = set("(){}[];,.<>=+-*/%&|^!~?:@")


class TokenizeError(Exception):
    def __init__(self, message: str, pos: int) -> None:
        super().__init__(f"{message} at offset {pos}")
        self.pos = pos


@dataclass(frozen=True)
class Token:
    kind: str  # ident | keyword | num | str | char | punct | eof
    text: str
    pos: int  # byte offset of the first character

    @property
    def end(self) -> int:
        return self.pos + len(self.text)


def _is_ident_start(c: str) -> bool:
    return c.isalpha() or c in "_$"


def _is_ident_part(c: str) -> bool:
    return c.isalnum() or c in "_$"


def tokenize(source: str) -> list[Token]:
    """Tokenize source, dropping comments; raises TokenizeError on bad lexemes."""
    out: list[Token] = []
    i = 0
    n = len(source)
    while i < n:
        c = source[i]
        if c in " \t\r\n\f":
            i += 1
            continue
        if c == "/" and i + 1 < n:
            nxt = source[i + 1]
            if nxt == "/":
                j = source.find("\n", i)
                i = n if j < 0 else j + 1
                continue
            if nxt == "*":
                j = source.find("*/", i + 2)
                if j < 0:
                    raise TokenizeError("unterminated block comment", i)
                i = j + 2
                continue
        if _is_ident_start(c):
            j = i + 1
            while j < n and _is_ident_part(source[j]):
                j += 1
            word = source[i:j]
            out.append(Token("keyword" if word in KEYWORDS else "ident", word, i))
            i = j
            continue
        if c.isdigit() or (c == "." and i + 1 < n and source[i + 1].isdigit()):
            i = _scan_number(source, i, out)
            continue
        if c == '"':
            i = _scan_string(source, i, out)
            continue
        if c == "'":
            i = _scan_char(source, i, out)
            continue
        three = source[i : i + 3]
        if three in _PUNCT3:
            out.append(Token("punct", three, i))
            i += 3
            continue
        two = source[i : i + 2]
        if two in _PUNCT2:
            out.append(Token("punct", two, i))
            i += 2
            continue
        if c in _PUNCT1:
            out.append(Token("punct", c, i))
            i += 1
            continue
        raise TokenizeError(f"unexpected character {c!r}", i)
    out.append(Token("eof", "", n))
    return out


def _scan_number(source: str, i: int, out: list[Token]) -> int:
    n = len(source)
    start = i
    if source[i] == "0" and i + 1 < n and source[i + 1] in "xXbB":
        i += 2
        while i < n and (source[i].isalnum() or source[i] == "_"):
            i += 1
        out.append(Token("num", source[start:i], start))
        return i
    seen_dot = False
    while i < n:
        c = source[i]
        if c.isdigit() or c == "_":
            i += 1
        elif c == "." and not seen_dot and (i + 1 >= n or source[i + 1] != "."):
            # a dot only stays numeric when not starting '..' (varargs)
            if i + 1 < n and (source[i + 1].isdigit() or not _is_ident_start(source[i + 1])):
                seen_dot = True
                i += 1
            else:
                break
        elif c in "eE" and i + 1 < n and (source[i + 1].isdigit() or source[i + 1] in "+-"):
            i += 2
        elif c in "fFdDlL":
            i += 1
            break
        else:
            break
    out.append(Token("num", source[start:i], start))
    return i


def _scan_string(source: str, i: int, out: list[Token]) -> int:
    n = len(source)
    start = i
    i += 1
    while i < n:
        c = source[i]
        if c == "\\":
            i += 2
            continue
        if c == '"':
            out.append(Token("str", source[start : i + 1], start))
            return i + 1
        if c == "\n":
            break
        i += 1
    raise TokenizeError("unterminated string literal", start)


def _scan_char(source: str, i: int, out: list[Token]) -> int:
    n = len(source)
    start = i
    i += 1
    while i < n:
        c = source[i]
        if c == "\\":
            i += 2
            continue
        if c == "'":
            out.append(Token("char", source[start : i + 1], start))
            return i + 1
        if c == "\n":
            break
        i += 1
    raise TokenizeError("unterminated character literal", start)
