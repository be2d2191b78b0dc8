from pathlib import Path

from graphprod.instance import load_instance

INSTANCES = Path(__file__).resolve().parent.parent / "instances"


def load(name):
    return load_instance(str(INSTANCES / f"{name}.json"))
