import json
import os
from pathlib import Path

import pytest

REPO_ROOT = Path(__file__).resolve().parent.parent
FIXTURES = REPO_ROOT / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir():
    return FIXTURES


@pytest.fixture(scope="session")
def form_w4():
    from sturmcert.formats import load_form_file

    return load_form_file(str(FIXTURES / "forms" / "gamma0_9_weight4.json"))


@pytest.fixture(scope="session")
def form_w24():
    from sturmcert.formats import load_form_file

    return load_form_file(str(FIXTURES / "forms" / "gamma0_9_weight24.json"))


@pytest.fixture(scope="session")
def form_w44():
    from sturmcert.formats import load_form_file

    return load_form_file(str(FIXTURES / "forms" / "gamma0_9_weight44.json"))


@pytest.fixture(scope="session")
def quartic_field(form_w24):
    return form_w24.field


@pytest.fixture(scope="session")
def octic_field(form_w44):
    return form_w44.field


@pytest.fixture(scope="session")
def spotcheck_table():
    with open(FIXTURES / "valuation_spotchecks.json") as fh:
        return json.load(fh)


@pytest.fixture(scope="session")
def example1_problem(form_w4, form_w24):
    from sturmcert.engine import ProblemStatement

    return ProblemStatement(
        f1=form_w4.series,
        f2=form_w24.series,
        field=form_w24.field,
        p=5,
        place_index=1,
        m=3,
        forms_on_gamma0_p=True,
        rho_f1_absolutely_irreducible=True,
    )


@pytest.fixture(scope="session")
def example2_problem(form_w4, form_w44):
    from sturmcert.engine import ProblemStatement

    return ProblemStatement(
        f1=form_w4.series,
        f2=form_w44.series,
        field=form_w44.field,
        p=5,
        place_index=2,
        m=5,
        forms_on_gamma0_p=True,
        rho_f1_absolutely_irreducible=True,
        galois_closure_degree=384,
    )
