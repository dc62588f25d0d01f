"""Bundled example systems."""

from __future__ import annotations

from importlib import resources


def names() -> list[str]:
    return sorted(p.name[:-4] for p in resources.files(__name__).iterdir() if p.name.endswith(".sys"))


def read(name: str) -> str:
    name = name.removesuffix(".sys")
    path = resources.files(__name__) / f"{name}.sys"
    if not path.is_file():
        raise FileNotFoundError(f"no bundled example {name!r}; available: {', '.join(names())}")
    return path.read_text()
