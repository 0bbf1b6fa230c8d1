"""Lookup tables distinguishing JDK-bundled ("native") from third-party code.

The index is a versioned data file shipped with the package: package prefixes
counting as native, a map of frequent JDK class names to their packages, and
a map of well-known constructors/static calls to the checked exception they
throw. Tests pin the file's hash.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from importlib import resources

_INDEX_RESOURCE = "jdk_index.json"


@dataclass(frozen=True)
class JdkIndex:
    version: str
    native_package_prefixes: tuple[str, ...]
    common_class_to_package: dict[str, str]
    checked_exception_throwers: dict[str, str]
    sha256: str

    def __post_init__(self) -> None:
        for name, pkg in self.common_class_to_package.items():
            if not self.is_native_package(pkg):
                raise ValueError(f"class {name} mapped to non-native package {pkg}")

    def is_native_package(self, package: str) -> bool:
        return any((package + ".").startswith(p) for p in self.native_package_prefixes)

    def is_native_import(self, import_path: str) -> bool:
        return any(import_path.startswith(p) for p in self.native_package_prefixes)

    def knows_class(self, simple_name: str) -> bool:
        return simple_name in self.common_class_to_package

    def needs_import(self, simple_name: str) -> bool:
        """True when the class is a known JDK class outside java.lang."""
        pkg = self.common_class_to_package.get(simple_name)
        return pkg is not None and pkg != "java.lang"

    def thrown_checked_exception(self, callee: str) -> str | None:
        return self.checked_exception_throwers.get(callee)


_cached: JdkIndex | None = None


def load_index() -> JdkIndex:
    global _cached
    if _cached is None:
        raw = resources.files(__package__).joinpath(_INDEX_RESOURCE).read_bytes()
        data = json.loads(raw)
        _cached = JdkIndex(
            version=data["version"],
            native_package_prefixes=tuple(data["prefixes"]),
            common_class_to_package=dict(data["classes"]),
            checked_exception_throwers=dict(data["checked_throwers"]),
            sha256=hashlib.sha256(raw).hexdigest(),
        )
    return _cached
