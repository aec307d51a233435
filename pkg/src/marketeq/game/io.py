import json
import os
from pathlib import Path
from typing import Any, Union

from marketeq.errors import InvalidGameError
from marketeq.game.game import CompetitionGame, Outcome

FIXTURES_PATH = Path(__file__).parent.parent / "fixtures"

PathLike = Union[str, os.PathLike]


def resolve_path(path: PathLike) -> Path:
    """Return `path`, or the bundled fixture of that name when no such file exists"""
    candidate = Path(path)
    if candidate.exists():
        return candidate
    for name in (candidate.name, f"{candidate.name}.json"):
        bundled = FIXTURES_PATH / name
        if bundled.exists():
            return bundled
    raise InvalidGameError(f"No such file or bundled fixture: {path}")


def load_json(path: PathLike) -> Any:
    with open(resolve_path(path), "r") as f:
        try:
            return json.load(f)
        except json.JSONDecodeError as e:
            raise InvalidGameError(f"{path}: invalid JSON: {e}")


def dump_json(document: Any, path: PathLike = None) -> str:
    """Serialize `document`; also write it to `path` when given"""
    text = json.dumps(document, indent=2)
    if path is not None:
        with open(path, "w") as f:
            f.write(text + "\n")
    return text


def load_game(path: PathLike) -> CompetitionGame:
    return CompetitionGame.from_dict(load_json(path))


def load_outcome(game: CompetitionGame, path: PathLike) -> Outcome:
    return Outcome.from_dict(game, load_json(path))


def load_fixture(name: str) -> CompetitionGame:
    """Load a bundled game fixture by file stem"""
    return load_game(FIXTURES_PATH / f"{name}.json")
