"""High-precision reference values frozen into the C++ unit tests.

Independent of the C++ implementation: distances are computed by rotating
the sphere with an explicit 3x3 matrix that carries the ellipse center to
the +z axis, then reading off the angular radius and azimuth of the rotated
point. Run with `python3 derive_values.py` to regenerate.
"""
import mpmath as mp

mp.mp.dps = 40


def unit(theta, phi):
    return mp.matrix([mp.sin(phi) * mp.cos(theta), mp.sin(phi) * mp.sin(theta), mp.cos(phi)])


def rot_z(a):
    return mp.matrix([[mp.cos(a), -mp.sin(a), 0], [mp.sin(a), mp.cos(a), 0], [0, 0, 1]])


def rot_y(a):
    return mp.matrix([[mp.cos(a), 0, mp.sin(a)], [0, 1, 0], [-mp.sin(a), 0, mp.cos(a)]])


def polar(theta, phi, alpha, beta):
    q = rot_y(-beta) * rot_z(-alpha) * unit(theta, phi)
    rho = mp.atan2(mp.sqrt(q[0] ** 2 + q[1] ** 2), q[2])
    # The center's south direction maps to +x and east to +y.
    omega = mp.atan2(q[0], q[1])
    return rho, omega


def distance(theta, phi, alpha, beta, gamma, e):
    rho, omega = polar(theta, phi, alpha, beta)
    return rho * mp.sqrt((1 - e**2) / (1 - e**2 * mp.cos(omega + gamma) ** 2))


def sigmoid(z):
    return 1 / (1 + mp.exp(-z))


def show(name, v):
    print(f"{name} = {mp.nstr(v, 20)}")


if __name__ == "__main__":
    show("pixel_center_theta", 2 * mp.pi * (256 + mp.mpf("0.5")) / 512)
    show("pixel_center_phi", mp.pi * (128 + mp.mpf("0.5")) / 256)
    u = unit(mp.mpf(1), mp.mpf(2))
    show("unit_x", u[0]); show("unit_y", u[1]); show("unit_z", u[2])
    rho, omega = polar(mp.mpf("1.2"), mp.mpf("1.0"), mp.mpf("0.4"), mp.mpf("1.4"))
    show("polar_rho", rho); show("polar_omega", omega)
    show("ellipse_d", distance(mp.mpf("2.0"), mp.mpf("1.1"), mp.mpf("1.0"), mp.mpf("1.3"),
                               mp.mpf("0.5"), mp.mpf("0.8")))

    # 64x32 field spot values for ellipse (alpha=2.5, beta=1.2, gamma=0.7, e=0.6)
    for (px, py) in [(0, 0), (25, 12), (63, 31), (40, 20)]:
        th = 2 * mp.pi * (px + mp.mpf("0.5")) / 64
        ph = mp.pi * (py + mp.mpf("0.5")) / 32
        show(f"field[{px},{py}]", distance(th, ph, mp.mpf("2.5"), mp.mpf("1.2"), mp.mpf("0.7"), mp.mpf("0.6")))

    # n=3 composite at 16x8, d_f=4 (objects back to front)
    objs = [
        dict(a="0.8", b="1.2", s="0.9", g="0.3", e="0.5", f=["1.0", "-0.5", "0.25", "2.0"]),
        dict(a="1.5", b="1.6", s="0.6", g="1.1", e="0.2", f=["-1.0", "0.75", "0.5", "0.0"]),
        dict(a="5.9", b="0.9", s="1.1", g="2.0", e="0.7", f=["0.3", "0.3", "-2.0", "1.5"]),
    ]
    for (px, py) in [(2, 3), (4, 4), (15, 2), (9, 6)]:
        th = 2 * mp.pi * (px + mp.mpf("0.5")) / 16
        ph = mp.pi * (py + mp.mpf("0.5")) / 8
        ops = []
        for o in objs:
            d = distance(th, ph, mp.mpf(o["a"]), mp.mpf(o["b"]), mp.mpf(o["g"]), mp.mpf(o["e"]))
            ops.append(sigmoid(mp.mpf(o["s"]) - d))
        vals = []
        for c in range(4):
            total = mp.mpf(0)
            for i, o in enumerate(objs):
                t = mp.mpf(1)
                for k in range(i + 1, len(objs)):
                    t *= 1 - ops[k]
                total += mp.mpf(o["f"][c]) * ops[i] * t
            vals.append(total)
        print(f"L[{px},{py}] = " + ", ".join(mp.nstr(v, 20) for v in vals))

    # composite weight for five opacities
    ops = [mp.mpf(x) for x in ["0.1", "0.35", "0.8", "0.05", "0.6"]]
    w = mp.mpf(0)
    for i in range(5):
        t = mp.mpf(1)
        for k in range(i + 1, 5):
            t *= 1 - ops[k]
        w += ops[i] * t
    show("weight_five", w)
