import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))  # for randgen

from reqmon import (Trace, VarDecl, load_requirements_file, load_varmap,
                    load_var_decls_file, make_component_spec)

DATA = os.path.join(os.path.dirname(__file__), "data")
GOLDEN = os.path.join(os.path.dirname(__file__), "golden")

UAM_TEXT = ("if persisted(10, current_consumption > 10 & windspeed > 5) "
            "ROS_component shall within 10 seconds "
            "satisfy current_consumption <= 10")


def data_path(name: str) -> str:
    return os.path.join(DATA, name)


def golden_path(name: str) -> str:
    return os.path.join(GOLDEN, name)


@pytest.fixture(scope="session")
def uam_requirements():
    return load_requirements_file(data_path("uam.req"))


@pytest.fixture(scope="session")
def uam_decls():
    return load_var_decls_file(data_path("uam.vars"))


@pytest.fixture(scope="session")
def uam_spec(uam_requirements, uam_decls):
    return make_component_spec(uam_requirements, uam_decls)


@pytest.fixture(scope="session")
def uam_varmap():
    return load_varmap(data_path("uam_varmap.json"))


@pytest.fixture(scope="session")
def uam_violation_trace_py():
    return Trace({"current_consumption": [12.0] * 21,
                  "windspeed": [7.0] * 21})


@pytest.fixture(scope="session")
def uam_recovery_trace_py():
    current = [12.0] * 15 + [9.0] * 6
    return Trace({"current_consumption": current, "windspeed": [7.0] * 21})


# the symbolic-threshold flavor of the same requirement (thresholds as inputs)
SYMBOLIC_UAM_TEXT = ("if persisted(10, current_consumption > cc_t "
                     "& wind_speed > ws_t) ROS_component shall within "
                     "10 seconds satisfy current_consumption <= cc_t")


@pytest.fixture(scope="session")
def symbolic_uam_decls():
    return [VarDecl("current_consumption", "numeric"),
            VarDecl("wind_speed", "numeric"),
            VarDecl("cc_t", "numeric"),
            VarDecl("ws_t", "numeric")]
