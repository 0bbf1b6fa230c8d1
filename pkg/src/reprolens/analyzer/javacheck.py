"""Bundled reference checker used when no JDK compiler is installed.

Invoked as ``python -m reprolens.analyzer.javacheck <file.java>``. It honors
the compiler-adapter contract: exit 0 on acceptance, exit 1 with
``error:``-style stderr lines on rejection. Checks performed:

* the file must parse as a compilation unit under the structural grammar;
* every bare capitalized type name must resolve to a declaration in the
  file, a known JDK class, an explicit import, or a wildcard import;
* a well-known checked-exception call site (``new FileReader(..)``,
  ``Thread.sleep(..)``, ...) must be covered by some try/catch or throws.

This is a deliberately shallow approximation of a real compiler: method
bodies are not type-checked.
"""

from __future__ import annotations

import sys

from .jdk import JdkIndex, load_index
from .parse import ParseFailure, ParseResult, parse_compilation_unit


def _line_of(source: str, pos: int) -> int:
    return source.count("\n", 0, max(0, pos)) + 1


def _import_covers(imports: list[str], name: str) -> bool:
    for imp in imports:
        if imp.endswith(".*"):
            return True
        if imp == name or imp.endswith("." + name):
            return True
    return False


def missing_types(result: ParseResult, index: JdkIndex) -> list[str]:
    defined = set(result.types)
    out = []
    for name in sorted(result.referenced):
        if name in defined:
            continue
        # JDK classes outside java.lang still need an import
        if index.knows_class(name) and not index.needs_import(name):
            continue
        if _import_covers(result.imports, name):
            continue
        out.append(name)
    return out


def unhandled_checked_calls(result: ParseResult, index: JdkIndex) -> list[tuple[str, str]]:
    handled = result.try_catch_count > 0 or any(m.throws for m in result.methods)
    if handled:
        return []
    out = []
    for callee in sorted(result.constructor_calls | result.static_calls):
        exc = index.thrown_checked_exception(callee)
        if exc:
            out.append((callee, exc))
    return out


def check_file(path: str) -> tuple[int, list[str]]:
    """Return (exit_code, stderr_lines) for one source file."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            source = fh.read()
    except OSError as exc:
        return 2, [f"error: cannot read {path}: {exc}"]
    try:
        result = parse_compilation_unit(source)
    except ParseFailure as exc:
        return 1, [f"{path}:{_line_of(source, exc.pos)}: error: {exc}", "1 error"]

    index = load_index()
    lines = []
    for name in missing_types(result, index):
        lines.append(f"{path}: error: cannot find symbol: class {name}")
    for callee, exc_name in unhandled_checked_calls(result, index):
        lines.append(
            f"{path}: error: unreported exception {exc_name} from {callee};"
            " must be caught or declared to be thrown"
        )
    if lines:
        lines.append(f"{len(lines)} error{'s' if len(lines) > 1 else ''}")
        return 1, lines
    return 0, []


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    if len(argv) != 1:
        print("usage: javacheck <file.java>", file=sys.stderr)
        return 2
    code, lines = check_file(argv[0])
    for line in lines:
        print(line, file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
