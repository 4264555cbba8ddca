import pytest

from weakdp.lattice_core import C1Label, PicardVector
from weakdp.linear_series import LinearSeries, get_base_points
from weakdp.surface_builder import (
    BuildError,
    InfinitelyNear,
    PlanePoint,
    PointConfiguration,
    build_surface,
    degree_four_example,
    verify_c1_object,
    verify_configuration,
)

EXAMPLE_SERIES = LinearSeries.parse(3, [
    "1/25*x**2*y - 2/35*x*y**2 + y*z**2",
    "7/25*x**2*y - 2/5*x*y**2 + y**2*z",
    "49/25*x**2*y - 14/5*x*y**2 + y**3",
    "1/2*x**3 - 1/2*x**2*y - 3/2*x**2*z + 23/98*x*y**2 + x*z**2",
    "-1/7*x*y**2 + x*y*z",
])
EXAMPLE_CONICS = {"H-Q1", "H-Q2", "H-Q3", "H-Q4", "2H-Q1-Q2-Q4-Q5", "2H-Q1-Q3-Q4-Q5", "2H-Q2-Q3-Q4-Q5"}


def test_degree_four_example():
    s = build_surface("1123,45;5", points=degree_four_example())
    assert s.parametrization.same_span(EXAMPLE_SERIES)
    assert {str(v) for v in s.effective_basis} == {"H-Q1-Q2-Q3", "Q4-Q5"}
    assert {str(v) for v in s.conic_families()} == EXAMPLE_CONICS
    assert s.degree == 4
    assert verify_c1_object(s).ok


def test_sampled_degree_four():
    s = build_surface("1123,45;5", seed=3)
    assert s.parametrization.dimension == 5
    assert {str(v) for v in s.report.effective_roots} == {"H-Q1-Q2-Q3", "Q4-Q5"}
    assert len(s.conic_families()) == 7


def test_smooth_degree_four():
    s = build_surface(";5", seed=1)
    assert s.report.effective_roots == ()
    assert s.parametrization.dimension == 5
    assert len(s.lines()) == 16


def test_infinitely_near_rank_two():
    s = build_surface("12;2", seed=0)
    assert isinstance(s.configuration.points[1], InfinitelyNear)
    assert s.parametrization.dimension == 8


def test_determinism():
    a = build_surface("1123,12,45;5", seed=11)
    b = build_surface("1123,12,45;5", seed=11)
    assert a.configuration == b.configuration
    assert a.parametrization == b.parametrization


@pytest.mark.parametrize("text", ["12,23;4", "1123,1145;5", "12,23,34,45;6", "1123,12,45,67;7", "278;7"])
def test_build_and_recover_base_points(text):
    s = build_surface(text, seed=2)
    label = C1Label.parse(text)
    assert verify_c1_object(s).ok
    assert s.parametrization.dimension == 10 - label.rank
    f = get_base_points(s.parametrization)
    assert f.count() == label.rank
    assert f.as_trees()[0] == tuple(sorted(s.configuration.tree(), key=lambda b: b.solution))


def test_rank_eight_with_cubic():
    s = build_surface("308;8", seed=0)
    assert {str(v) for v in s.report.effective_roots} == {"3H-Q1-Q2-Q3-Q4-Q5-Q6-Q7-2Q8"}


def test_flex_configuration_unsatisfiable():
    with pytest.raises(BuildError, match="constraints unsatisfiable over field"):
        build_surface("1123,1345,1156,1258,1367,1247,1468,1178;8", seed=0, retries=6)


def test_degenerate_fixture_names_extra_root():
    # p4 also lies on the line through p1, p2, p3
    config = PointConfiguration(5, (PlanePoint(0, 0), PlanePoint(1, 0), PlanePoint(2, 0), PlanePoint(3, 0),
                                    PlanePoint(1, 5)))
    report = verify_configuration(config, C1Label.parse("1123;5"))
    assert not report.ok
    assert PicardVector.parse("H-Q1-Q2-Q4", 5) in report.unexpected
    assert "H-Q1-Q2-Q4" in report.describe()
    with pytest.raises(BuildError, match="unexpected effective roots"):
        build_surface("1123;5", points=config)


def test_configuration_json_round_trip():
    c = degree_four_example()
    assert PointConfiguration.from_json(c.to_json()) == c


def test_bad_inputs():
    with pytest.raises(BuildError):
        build_surface("-1145;5")
    with pytest.raises(BuildError):
        InfinitelyNear(1, "Ct", (0, 1))
    with pytest.raises(BuildError):
        PointConfiguration(2, (InfinitelyNear(2, "Ct", (0, 0)), PlanePoint(0, 0)))
