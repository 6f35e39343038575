import json
import os
import tempfile
from pathlib import Path
from typing import Any, Type, TypeVar, Union

from pydantic import BaseModel

from admsynth.services.errors import ArtifactError

Model = TypeVar("Model", bound=BaseModel)
PathLike = Union[str, Path]


def read_json(path: PathLike) -> Any:
    """
    Read a JSON document.

    Args:
        path: File to read

    Returns:
        The decoded document

    Raises:
        ArtifactError: If the file is missing, unreadable or not JSON
    """
    try:
        with open(path, encoding="utf-8") as handle:
            return json.load(handle)
    except (OSError, json.JSONDecodeError) as e:
        raise ArtifactError(f"Error reading {path}: {str(e)}")


def load_model(path: PathLike, model: Type[Model]) -> Model:
    """
    Read a JSON file into a schema.

    Raises:
        ArtifactError: If the file cannot be read as JSON
        pydantic.ValidationError: If the document does not match ``model``
    """
    return model.model_validate(read_json(path))


def dump_json(document: Union[BaseModel, Any]) -> str:
    """Deterministic JSON text: sorted keys, two-space indent, trailing newline."""
    if isinstance(document, BaseModel):
        document = document.model_dump(mode="json", by_alias=True)
    return json.dumps(document, sort_keys=True, indent=2) + "\n"


def write_text(path: PathLike, text: str) -> None:
    """
    Write a file atomically through a temporary file in the same directory.

    Raises:
        ArtifactError: If the file cannot be written
    """
    target = Path(path)
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        fd, temporary = tempfile.mkstemp(dir=target.parent, prefix=f".{target.name}.")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as handle:
                handle.write(text)
            os.replace(temporary, target)
        except BaseException:
            os.unlink(temporary)
            raise
    except OSError as e:
        raise ArtifactError(f"Error writing {path}: {str(e)}")

