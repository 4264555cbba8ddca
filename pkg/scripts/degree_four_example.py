"""Build the degree-four surface with an A3+A1 singularity type from explicit points.

Prints the cubic series, the effective basis, and the conic families.
"""

from weakdp.surface_builder import build_surface, degree_four_example


def main() -> None:
    config = degree_four_example()
    s = build_surface("1123,45;5", points=config)
    print("points:")
    for i, p in enumerate(config.points, 1):
        where = f"({p.x}, {p.y})" if hasattr(p, "x") else f"near p{p.parent}, chart {p.chart} at {p.coords[0]}, {p.coords[1]}"
        print(f"  p{i}: {where}")
    print("cubic series:")
    for g in s.parametrization.format():
        print(f"  {g}")
    print("effective basis:", ", ".join(str(v) for v in s.effective_basis))
    print("conic families: ", ", ".join(str(v) for v in s.conic_families()))
    print("lines:          ", ", ".join(str(v) for v in s.lines()))


if __name__ == "__main__":
    main()
