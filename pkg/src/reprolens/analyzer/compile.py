"""External-compiler adapter for the compilability feature.

The adapter spawns a configurable command as ``<cmd> <file>`` inside a
per-call scratch subdirectory: exit code 0 means success, stderr is parsed
for ``error:`` lines. The default command is ``javac`` when one is on PATH;
otherwise the bundled reference checker (``python -m
reprolens.analyzer.javacheck``) is used, which applies the same structural
grammar plus import/exception resolution. Compilability is therefore
compiler-relative; the backend that produced a verdict is recorded.
"""

from __future__ import annotations

import enum
import os
import shutil
import subprocess
import sys
import tempfile
import uuid
from dataclasses import dataclass

from ..errors import CompilerConfigError
from .structure import StructuralSummary, analyze_structure, best_source

DEFAULT_TIMEOUT_S = 30.0
FALLBACK_BACKEND = "reprolens-javacheck"


class CompileStatus(enum.Enum):
    SUCCESS = "success"
    FAILURE = "failure"
    UNAVAILABLE = "unavailable"
    TIMEOUT = "timeout"


@dataclass(frozen=True)
class Diagnostic:
    line: int | None
    message: str


@dataclass(frozen=True)
class CompileResult:
    status: CompileStatus
    diagnostics: tuple[Diagnostic, ...] = ()
    backend: str = ""

    @property
    def ok(self) -> bool:
        return self.status is CompileStatus.SUCCESS


@dataclass(frozen=True)
class CompilerConfig:
    command: tuple[str, ...] | None = None  # None: javac if present, else bundled checker
    timeout_s: float = DEFAULT_TIMEOUT_S
    scratch_dir: str | None = None  # None: system temp dir

    def resolved_command(self) -> tuple[str, ...]:
        if self.command:
            return tuple(self.command)
        if shutil.which("javac"):
            return ("javac",)
        return (sys.executable, "-m", "reprolens.analyzer.javacheck")

    def backend_name(self) -> str:
        cmd = self.resolved_command()
        if cmd[-1] == "reprolens.analyzer.javacheck":
            return FALLBACK_BACKEND
        return cmd[0]


def bundled_checker_config(timeout_s: float = DEFAULT_TIMEOUT_S) -> CompilerConfig:
    """Config pinned to the bundled checker regardless of an installed JDK."""
    return CompilerConfig(
        command=(sys.executable, "-m", "reprolens.analyzer.javacheck"),
        timeout_s=timeout_s,
    )


def _parse_diagnostics(stderr: str) -> tuple[Diagnostic, ...]:
    out: list[Diagnostic] = []
    for raw in stderr.splitlines():
        if "error:" not in raw:
            continue
        head, _, message = raw.partition("error:")
        line: int | None = None
        bits = head.split(":")
        for bit in reversed(bits):
            bit = bit.strip()
            if bit.isdigit():
                line = int(bit)
                break
        out.append(Diagnostic(line, message.strip()))
    if not out and stderr.strip():
        out.append(Diagnostic(None, stderr.strip().splitlines()[-1]))
    return tuple(out)


def check_compilability(
    snippet: str,
    config: CompilerConfig | None = None,
    summary: StructuralSummary | None = None,
    public_name: str | None = None,
) -> CompileResult:
    """Compile the best-parsing wrapped form and report the exit state."""
    config = config or CompilerConfig()
    if summary is None:
        summary = analyze_structure(snippet)
    source = best_source(snippet, summary)
    # javac requires the file name to match the public top-level class
    name = public_name or summary.public_type
    filename = f"{name}.java" if name else "Snippet.java"

    root = config.scratch_dir or tempfile.gettempdir()
    workdir = os.path.join(root, f"reprolens-{uuid.uuid4().hex}")
    try:
        os.makedirs(workdir)
    except OSError as exc:
        raise CompilerConfigError(f"scratch directory not writable: {exc}") from exc

    backend = config.backend_name()
    path = os.path.join(workdir, filename)
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(source)
        cmd = list(config.resolved_command()) + [filename]
        try:
            proc = subprocess.run(
                cmd,
                cwd=workdir,
                capture_output=True,
                text=True,
                timeout=config.timeout_s,
            )
        except (FileNotFoundError, PermissionError):
            return CompileResult(CompileStatus.UNAVAILABLE, (), backend)
        except subprocess.TimeoutExpired:
            return CompileResult(CompileStatus.TIMEOUT, (), backend)
        if proc.returncode == 0:
            return CompileResult(CompileStatus.SUCCESS, (), backend)
        return CompileResult(CompileStatus.FAILURE, _parse_diagnostics(proc.stderr), backend)
    finally:
        shutil.rmtree(workdir, ignore_errors=True)
