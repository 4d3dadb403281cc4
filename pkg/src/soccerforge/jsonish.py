"""Forgiving extraction of dict-shaped payloads from model text.

Chat models return the requested dictionary wrapped in prose, markdown
fences, or Python-repr quoting. This module finds the first balanced
brace-delimited object (preferring a fenced block when present) and
parses it as strict JSON, as a Python literal, or after converting
single-quoted pseudo-JSON to strict form with escapes preserved.
"""

from __future__ import annotations

import ast
import json
import re
import warnings

from .errors import SoccerForgeError

_FENCE_RE = re.compile(r"```(?:[A-Za-z0-9_+-]*\n)?(.*?)```", re.DOTALL)


class ExtractionError(SoccerForgeError):
    """No parseable object could be recovered from the text."""

    def __init__(self, message: str, raw: str):
        self.raw = raw
        super().__init__(message)


def find_object_text(text: str) -> str | None:
    """Return the first balanced {...} block, string-aware, or None.

    Content inside the first triple-backtick fence wins over anything
    outside it.
    """
    fenced = _FENCE_RE.search(text)
    if fenced:
        inner = _balanced_block(fenced.group(1), 0)
        if inner is not None:
            return inner
    return _balanced_block(text, 0)


def _balanced_block(text: str, offset: int) -> str | None:
    start = text.find("{", offset)
    if start < 0:
        return None
    depth = 0
    quote: str | None = None
    escaped = False
    for i in range(start, len(text)):
        ch = text[i]
        if quote is not None:
            if escaped:
                escaped = False
            elif ch == "\\":
                escaped = True
            elif ch == quote:
                quote = None
            continue
        if ch in "'\"":
            quote = ch
        elif ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
            if depth == 0:
                return text[start : i + 1]
    return None


def _candidate_blocks(text: str, limit: int = 8):
    """Balanced blocks left to right, fenced content first."""
    fenced = _FENCE_RE.search(text)
    sources = [fenced.group(1), text] if fenced else [text]
    seen = set()
    yielded = 0
    for source in sources:
        offset = 0
        while yielded < limit:
            block = _balanced_block(source, offset)
            if block is None:
                break
            offset = source.find(block, offset) + len(block)
            if block not in seen:
                seen.add(block)
                yielded += 1
                yield block


def _convert_pseudo_json(text: str) -> str:
    """Rewrite single-quoted strings and Python keywords to strict JSON."""
    out: list[str] = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "'" or ch == '"':
            i += 1
            body: list[str] = []
            while i < n:
                c = text[i]
                if c == "\\" and i + 1 < n:
                    nxt = text[i + 1]
                    if nxt == "'":
                        body.append("'")  # escaped quote loses its backslash
                    else:
                        body.append(c)
                        body.append(nxt)
                    i += 2
                    continue
                if c == ch:
                    i += 1
                    break
                body.append(c)
                i += 1
            out.append(json.dumps("".join(_decode_passthrough(body))))
        else:
            i += 1
            if ch.isalpha():
                j = i
                while j < n and text[j].isalpha():
                    j += 1
                word = ch + text[i:j]
                mapped = {"True": "true", "False": "false", "None": "null"}.get(word)
                if mapped is not None:
                    out.append(mapped)
                    i = j
                    continue
                out.append(word)
                i = j
                continue
            out.append(ch)
    return "".join(out)


def _decode_passthrough(chars: list[str]) -> list[str]:
    # chars still carry JSON-style escapes (\" \n \\ ...); decode them so the
    # re-dump does not double-escape
    raw = "".join(chars)
    if "\\" not in raw:
        return [raw]
    try:
        with warnings.catch_warnings():
            # junk like \s is common in model text; the codec passes it through
            warnings.simplefilter("ignore", DeprecationWarning)
            warnings.simplefilter("ignore", SyntaxWarning)
            return [
                raw.encode("latin-1", errors="backslashreplace").decode("unicode_escape")
            ]
    except UnicodeDecodeError:
        return [raw]


def parse_object(raw: str) -> dict:
    """Extract and parse the first parseable object in raw model text.

    Walks candidate brace-delimited blocks (fenced content first); each
    is tried as strict JSON, a Python literal, then pseudo-JSON repair.
    Raises ExtractionError (with the raw text preserved) when nothing
    dict-shaped can be recovered.
    """
    found_any = False
    for block in _candidate_blocks(raw):
        found_any = True
        for parser in (json.loads, _literal_eval, _repair_loads):
            try:
                obj = parser(block)
            except Exception:
                continue
            if isinstance(obj, dict):
                return obj
    if not found_any:
        raise ExtractionError("no brace-delimited object found", raw)
    raise ExtractionError("object found but not parseable", raw)


def _literal_eval(block: str):
    try:
        return ast.literal_eval(block)
    except (ValueError, SyntaxError, MemoryError, RecursionError) as exc:
        raise ValueError(str(exc)) from exc


def _repair_loads(block: str):
    return json.loads(_convert_pseudo_json(block))
