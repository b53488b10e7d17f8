"""Normalize submission text into token-code streams.

The `c_like` mode is one shared lexer for C, C++ and Java: the keyword set is
the union of the three languages, every identifier collapses to one IDENT
code, and literals collapse to per-class codes (all integer literals alike,
all strings alike).  Whitespace and comments are dropped.  Downstream metrics
therefore cannot be fooled by renaming, reformatting or constant tweaking.

The `raw` mode emits one token per byte value with nothing dropped, for
comparing submissions as plain text.

Files are lexed in the submission's (lexicographic) file order with a
FILE_BREAK token between files so token runs never straddle file boundaries.
Unlexable input never aborts an analysis: each offending byte becomes an
UNKNOWN token and is tallied on the stream.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from .corpus import Submission

__all__ = [
    "TokenStream",
    "tokenize",
    "serialize",
    "token_table",
    "UNKNOWN",
    "IDENT",
    "INT_LIT",
    "FLOAT_LIT",
    "STRING_LIT",
    "CHAR_LIT",
    "FILE_BREAK",
    "KEYWORD_CODES",
    "OP_CODES",
]

UNKNOWN = 1
IDENT = 2
INT_LIT = 3
FLOAT_LIT = 4
STRING_LIT = 5
CHAR_LIT = 6

# Union of the C, C++ and Java keyword sets.  Cross-language collisions are
# harmless here: a Java file using `final` and a C file using `restrict` both
# get stable codes, and an identifier that happens to spell another language's
# keyword still collapses consistently for every submission.
_KEYWORDS = (
    "abstract", "alignas", "alignof", "asm", "assert", "auto", "bool",
    "boolean", "break", "byte", "case", "catch", "char", "class", "const",
    "const_cast", "constexpr", "continue", "decltype", "default", "delete",
    "do", "double", "dynamic_cast", "else", "enum", "explicit", "export",
    "extends", "extern", "false", "final", "finally", "float", "for",
    "friend", "goto", "if", "implements", "import", "inline", "instanceof",
    "int", "interface", "long", "mutable", "namespace", "native", "new",
    "noexcept", "null", "nullptr", "operator", "package", "private",
    "protected", "public", "register", "reinterpret_cast", "restrict",
    "return", "short", "signed", "sizeof", "static", "static_assert",
    "static_cast", "strictfp", "struct", "super", "switch", "synchronized",
    "template", "this", "thread_local", "throw", "throws", "transient",
    "try", "typedef", "typeid", "typename", "union", "unsigned", "using",
    "virtual", "void", "volatile", "wchar_t", "while",
)

# Longest first so the regex alternation is maximal-munch.
_OPERATORS = (
    ">>>=",
    "<<=", ">>=", ">>>", "...", "->*",
    "::", "->", "++", "--", "<<", ">>", "<=", ">=", "==", "!=", "&&", "||",
    "+=", "-=", "*=", "/=", "%=", "&=", "^=", "|=", ".*",
    "+", "-", "*", "/", "%", "&", "|", "^", "~", "!", "<", ">", "=", "?",
    ":", ";", ",", ".", "(", ")", "[", "]", "{", "}", "@", "#",
)

KEYWORD_BASE = 16
KEYWORD_CODES = {kw: KEYWORD_BASE + i for i, kw in enumerate(_KEYWORDS)}
OP_BASE = KEYWORD_BASE + len(_KEYWORDS)
OP_CODES = {op: OP_BASE + i for i, op in enumerate(_OPERATORS)}

FILE_BREAK = 256

# Serialization escape byte: codes below it take one byte, codes at or above
# it take two (escape, code - escape).  Keeping every c_like code below the
# escape makes c_like streams one byte per token.
_ESCAPE = 0xFF
assert OP_BASE + len(_OPERATORS) <= _ESCAPE

_DIGITS = r"\d(?:['_]?\d)*"
_TOKEN_RE = re.compile(
    r"""
      (?P<ws>\s+)
    | (?P<comment>//[^\n]*|/\*.*?\*/|/\*.*)
    | (?P<float>(?:{d}\.(?:{d})?|\.{d})(?:[eE][+-]?{d})?[fFdDlL]?|{d}[eE][+-]?{d}[fFdDlL]?)
    | (?P<int>(?:0[xX][0-9a-fA-F](?:['_]?[0-9a-fA-F])*|0[bB][01](?:['_]?[01])*|{d})[uUlL]*)
    | (?P<string>"(?:\\.|[^"\\\n])*(?:"|(?=\n)|$))
    | (?P<char>'(?:\\.|[^'\\\n])*(?:'|(?=\n)|$))
    | (?P<ident>[A-Za-z_$\x80-\xff][A-Za-z0-9_$\x80-\xff]*)
    | (?P<op>{ops})
    """.format(
        d=_DIGITS,
        ops="|".join(re.escape(op) for op in _OPERATORS),
    ),
    re.VERBOSE | re.DOTALL,
)

_CLASS_CODES = {
    "float": FLOAT_LIT,
    "int": INT_LIT,
    "string": STRING_LIT,
    "char": CHAR_LIT,
}


@dataclass
class TokenStream:
    submission_id: str
    tokens: list[int] = field(default_factory=list)
    # (file index, start byte, end byte) per token
    byte_spans: list[tuple[int, int, int]] = field(default_factory=list)
    unknown_count: int = 0

    def __len__(self):
        return len(self.tokens)


def _lex_text(text: str, file_index: int, out: TokenStream):
    pos = 0
    end = len(text)
    while pos < end:
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            out.tokens.append(UNKNOWN)
            out.byte_spans.append((file_index, pos, pos + 1))
            out.unknown_count += 1
            pos += 1
            continue
        kind = m.lastgroup
        if kind not in ("ws", "comment"):
            if kind == "ident":
                word = m.group()
                code = KEYWORD_CODES.get(word, IDENT)
            elif kind == "op":
                code = OP_CODES[m.group()]
            else:
                code = _CLASS_CODES[kind]
            out.tokens.append(code)
            out.byte_spans.append((file_index, m.start(), m.end()))
        pos = m.end()


def tokenize(sub: Submission, language: str = "c_like") -> TokenStream:
    """Lex every file of the submission into one stream.

    Byte offsets in the spans index into each file's raw bytes; lexing runs
    over a latin-1 view so offsets are exact for any input, including UTF-8.
    """
    out = TokenStream(submission_id=sub.id)
    if language == "c_like":
        for fi, f in enumerate(sub.files):
            if fi > 0:
                prev = sub.files[fi - 1]
                out.tokens.append(FILE_BREAK)
                out.byte_spans.append((fi - 1, prev.size, prev.size))
            _lex_text(f.data.decode("latin-1"), fi, out)
    elif language == "raw":
        for fi, f in enumerate(sub.files):
            if fi > 0:
                prev = sub.files[fi - 1]
                out.tokens.append(FILE_BREAK)
                out.byte_spans.append((fi - 1, prev.size, prev.size))
            out.tokens.extend(f.data)
            out.byte_spans.extend((fi, i, i + 1) for i in range(f.size))
    else:
        raise ValueError(f"unsupported language {language!r}")
    return out


def serialize(ts: TokenStream) -> bytes:
    """Injective byte encoding of the token sequence (feeds the compressor)."""
    out = bytearray()
    for code in ts.tokens:
        if code < _ESCAPE:
            out.append(code)
        else:
            ext = code - _ESCAPE
            if ext > 0xFF:
                raise ValueError(f"token code out of range: {code}")
            out.append(_ESCAPE)
            out.append(ext)
    return bytes(out)


def token_table() -> dict[int, str]:
    """Code -> human-readable name, for tooltips and the reference file."""
    table = {
        UNKNOWN: "UNKNOWN",
        IDENT: "IDENT",
        INT_LIT: "INT_LIT",
        FLOAT_LIT: "FLOAT_LIT",
        STRING_LIT: "STRING_LIT",
        CHAR_LIT: "CHAR_LIT",
        FILE_BREAK: "FILE_BREAK",
    }
    for kw, code in KEYWORD_CODES.items():
        table[code] = f"KEYWORD({kw})"
    for op, code in OP_CODES.items():
        table[code] = f"OP({op})"
    return dict(sorted(table.items()))
