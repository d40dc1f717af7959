import json
import os
import pathlib
import shutil

import pytest

ROOT = pathlib.Path(__file__).resolve().parents[2]


@pytest.fixture(scope="session")
def ima_exe():
    exe = os.environ.get("IMA_EXE") or shutil.which("ima")
    if not exe:
        pytest.skip("ima executable not found (set IMA_EXE)")
    return exe


@pytest.fixture(scope="session")
def validate():
    from jsonschema import Draft202012Validator
    from referencing import Registry, Resource

    schema_dir = pathlib.Path(os.environ.get("IMA_SCHEMA_DIR", ROOT / "schemas"))
    schemas = {p.name: json.loads(p.read_text()) for p in schema_dir.glob("*.schema.json")}
    registry = Registry().with_resources(
        (name, Resource.from_contents(body)) for name, body in schemas.items()
    )

    def check(instance, name):
        Draft202012Validator(schemas[name], registry=registry).validate(instance)

    return check
