import functools

from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", max_examples=100, deadline=None, derandomize=True,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much],
)
settings.load_profile("default")

# property suites named by the acceptance criteria: label -> "module::function"
PROPERTIES = {
    "Euler annihilates divergences (1D)": "test_jet::test_euler_annihilates_divergences_1d",
    "Euler annihilates divergences (2D)": "test_jet::test_euler_annihilates_divergences_2d",
    "adjoint involution (1D)": "test_jet::test_adjoint_involution_1d",
    "adjoint involution (2D)": "test_jet::test_adjoint_involution_2d",
    "Lagrange remainder is a total derivative": "test_jet::test_lagrange_remainder_is_total_derivative",
    "Darboux annihilation": "test_wronskian::test_darboux_annihilation",
    "adjoint-function ladder": "test_wronskian::test_adjoint_function_ladder",
    "span invariance": "test_ode::test_span_invariance",
    "gauge kernel, constants": "test_ode::test_gauge_kernel_constants",
    "gauge kernel, functions of t": "test_evolution::test_gauge_kernel_functions_of_t",
    "order bound": "test_ode::test_order_bound_never_violated",
    "ansatz splitting for u'' = 0": "test_ode::test_elementary_ansatz_splitting",
}

# "module::function" -> [examples run, passed]
PROPERTY_RUNS = {}


def count_examples(key, fn):
    """Wrap the hypothesis inner test of fn so executed examples are counted."""
    inner = fn.hypothesis.inner_test
    if getattr(inner, "_counted", False):
        return
    record = PROPERTY_RUNS.setdefault(key, [0, None])

    @functools.wraps(inner)
    def counted(*args, **kwargs):
        out = inner(*args, **kwargs)
        # rejected examples raise before reaching this line
        record[0] += 1
        return out

    counted._counted = True
    fn.hypothesis.inner_test = counted


def _key(item):
    return f"{item.module.__name__}::{item.name}"


def pytest_collection_modifyitems(items):
    wanted = set(PROPERTIES.values())
    for item in items:
        if _key(item) in wanted:
            count_examples(_key(item), item.obj)
    # the property-suite criterion reads results of the other files, so it runs last
    last = [i for i in items if i.name == "test_criterion_12_property_suites"]
    items[:] = [i for i in items if i not in last] + last


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    module = report.nodeid.split("::")[0].rsplit("/", 1)[-1].removesuffix(".py")
    key = f"{module}::{report.nodeid.split('::')[-1]}"
    if key in PROPERTY_RUNS:
        PROPERTY_RUNS[key][1] = report.passed


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
