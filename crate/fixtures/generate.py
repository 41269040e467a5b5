#!/usr/bin/env python3
"""Regenerates the fixture corpus. Deterministic; stdlib only.

    python3 fixtures/generate.py

Writes fixtures/corpus/*.json (exporter-style animations with bookkeeping
fields and full-precision floats), fixtures/stats/ (duration set plus
expected.json) and fixtures/svg/.
"""

import json
import math
import random
import shutil
from pathlib import Path

ROOT = Path(__file__).resolve().parent

# Exporter handle defaults and a few hand-tuned curves.
EASE_IN_OUT = ([0.333], [0.0], [0.667], [1.0])
NEAR_LINEAR = ([0.167], [0.167], [0.833], [0.833])
SMOOTH_STOP = ([0.167], [0.0], [0.833], [1.0])
SOFT_EASE = ([0.167], [0.0], [0.667], [1.0])
LINEAR = ([0.0], [0.0], [1.0], [1.0])
BOUNCE = ([0.3], [-2.79], [0.78], [-1.79])
OVERSHOOT = ([0.175], [0.885], [0.32], [1.275])
PRESET_EASES = [EASE_IN_OUT, NEAR_LINEAR, SMOOTH_STOP, SOFT_EASE, LINEAR]


class Gen:
    def __init__(self, seed):
        self.r = random.Random(seed)
        self.ix = 0

    def noisy(self, x, spread=1e-3):
        """Value as an exporter writes it: slightly off and at 12 decimals."""
        return round(x + self.r.uniform(-spread, spread), 12)

    def chan(self):
        return round(self.r.randrange(256) / 255, 12)

    def color(self):
        return [self.chan(), self.chan(), self.chan(), 1]

    def next_ix(self):
        self.ix += 1
        return self.ix

    def precise(self, value):
        """Numbers nudged off their round values, recursively."""
        if isinstance(value, list):
            return [self.precise(v) for v in value]
        if isinstance(value, dict):
            return {k: self.precise(v) if k in "iov" else v for k, v in value.items()}
        if isinstance(value, bool) or not isinstance(value, (int, float)) or value == 0:
            return value
        return self.noisy(value, 1e-4 * max(1.0, abs(value)))

    def static(self, value, exact=False):
        return {"a": 0, "k": value if exact else self.precise(value), "ix": self.next_ix()}

    def handle(self, xs):
        return [min(1.0, max(0.0, self.noisy(x, 1e-4))) for x in xs]

    def custom_ease(self):
        ox = round(self.r.uniform(0.05, 0.7), 12)
        ix = round(self.r.uniform(0.3, 0.95), 12)
        oy = round(self.r.uniform(-0.4, 0.6), 12)
        iy = round(self.r.uniform(0.6, 1.4), 12)
        return ([ox], [oy], [ix], [iy])

    def ease(self):
        roll = self.r.random()
        if roll < 0.5:
            return self.r.choice(PRESET_EASES)
        if roll < 0.6:
            return self.r.choice([BOUNCE, OVERSHOOT])
        return self.custom_ease()

    def animated(self, times, values, eases=None, holds=(), exact=False):
        kfs = []
        for n, (t, v) in enumerate(zip(times, values)):
            kf = {"t": t, "s": v if exact else self.precise(v)}
            if n + 1 < len(times):
                if n in holds:
                    kf["h"] = 1
                else:
                    ox, oy, ix, iy = eases[n] if eases else self.ease()
                    kf["o"] = {"x": self.handle(ox), "y": self.precise(oy)}
                    kf["i"] = {"x": self.handle(ix), "y": self.precise(iy)}
            kfs.append(kf)
        return {"a": 1, "k": kfs, "ix": self.next_ix()}

    def per_dim_ease(self):
        a, b = self.ease(), self.ease()
        return tuple(a[k] + b[k] for k in range(4))

    def times(self, op, count):
        inner = sorted(self.r.sample(range(1, int(op) - 1), count - 2))
        return [0] + inner + [int(op) - 1]

    def maybe_animated(self, base, op, jitter, probability=0.5):
        if self.r.random() >= probability:
            return self.static(base)
        count = self.r.randint(2, 4)
        values = [[self.noisy(c + self.r.uniform(-jitter, jitter), 0.0) for c in base] for _ in range(count)]
        return self.animated(self.times(op, count), values)


def transform(g, p=(0, 0), a=(0, 0), s=(100, 100), r=0.0, o=100.0, group=False):
    tr = {
        "p": g.static(list(p)),
        "a": g.static(list(a)),
        "s": g.static(list(s)),
        "r": g.static(r),
        "o": g.static(o),
    }
    if group:
        tr.update({"ty": "tr", "sk": g.static(0), "sa": g.static(0), "nm": "Transform"})
    return tr


def rect(g, p, s, r=0.0, name="Rectangle Path 1"):
    return {"ty": "rc", "d": 1, "s": g.static(list(s)), "p": g.static(list(p)), "r": g.static(r),
            "nm": name, "mn": "ADBE Vector Shape - Rect", "hd": False}


def ellipse(g, p, s, name="Ellipse Path 1"):
    return {"ty": "el", "d": 1, "s": g.static(list(s)), "p": g.static(list(p)),
            "nm": name, "mn": "ADBE Vector Shape - Ellipse", "hd": False}


def star(g, p, outer, inner, points, polygon=False):
    item = {"ty": "sr", "sy": 2 if polygon else 1, "d": 1, "pt": g.static(points, exact=True), "p": g.static(list(p)),
            "r": g.static(0), "or": g.static(outer), "os": g.static(0),
            "nm": "Polystar Path 1", "mn": "ADBE Vector Shape - Star", "hd": False, "ix": g.next_ix()}
    if not polygon:
        item["ir"] = g.static(inner)
        item["is"] = g.static(0)
    return item


def path_value(g, points, smooth=0.35, closed=True):
    n = len(points)
    vs, ins, outs = [], [], []
    for k, (x, y) in enumerate(points):
        px, py = points[k - 1]
        nx, ny = points[(k + 1) % n]
        tx, ty = (nx - px) * smooth / 2, (ny - py) * smooth / 2
        vs.append([g.noisy(x), g.noisy(y)])
        ins.append([g.noisy(-tx), g.noisy(-ty)])
        outs.append([g.noisy(tx), g.noisy(ty)])
    return {"i": ins, "o": outs, "v": vs, "c": closed}


def path(g, points, smooth=0.35, closed=True, morph_to=None, op=60):
    if morph_to is None:
        ks = g.static(path_value(g, points, smooth, closed))
    else:
        ks = g.animated([0, op // 2, op - 1], [[path_value(g, points, smooth, closed)],
                                               [path_value(g, morph_to, smooth, closed)],
                                               [path_value(g, points, smooth, closed)]])
    return {"ind": 0, "ty": "sh", "ix": g.next_ix(), "ks": ks, "nm": "Path 1",
            "mn": "ADBE Vector Shape - Group", "hd": False}


def fill(g, c, o=100, animated_to=None, op=60):
    cprop = g.static(c, exact=True) if animated_to is None else g.animated([0, op - 1], [c, animated_to], exact=True)
    return {"ty": "fl", "c": cprop, "o": g.static(o), "r": 1, "bm": 0, "nm": "Fill 1",
            "mn": "ADBE Vector Graphic - Fill", "hd": False}


def stroke(g, c, w, o=100, width_prop=None):
    return {"ty": "st", "c": g.static(c, exact=True), "o": g.static(o), "w": width_prop or g.static(w), "lc": 2, "lj": 2,
            "ml": 4, "bm": 0, "nm": "Stroke 1", "mn": "ADBE Vector Graphic - Stroke", "hd": False}


def gradient(g, stops=3):
    colors = []
    for k in range(stops):
        colors += [round(k / (stops - 1), 12)] + g.color()[:3]
    return {"p": stops, "k": g.static(colors, exact=True)}


def gfill(g, start, end, radial=False):
    item = {"ty": "gf", "o": g.static(100), "r": 1, "bm": 0, "g": gradient(g, g.r.randint(2, 4)),
            "s": g.static(list(start)), "e": g.static(list(end)), "t": 2 if radial else 1,
            "nm": "Gradient Fill 1", "mn": "ADBE Vector Graphic - G-Fill", "hd": False}
    if radial:
        item["h"] = g.static(g.noisy(20, 5))
        item["a"] = g.static(g.noisy(45, 5))
    return item


def gstroke(g, start, end, w):
    return {"ty": "gs", "o": g.static(100), "w": g.static(w), "g": gradient(g, 2), "s": g.static(list(start)),
            "e": g.static(list(end)), "t": 1, "lc": 2, "lj": 1, "ml": 4, "bm": 0,
            "nm": "Gradient Stroke 1", "mn": "ADBE Vector Graphic - G-Stroke", "hd": False}


def rounded(g, r):
    return {"ty": "rd", "nm": "Round Corners 1", "r": g.static(r), "ix": g.next_ix(),
            "mn": "ADBE Vector Filter - RC", "hd": False}


def group(g, items, tr=None, name="Group 1"):
    return {"ty": "gr", "it": items + [tr or transform(g, group=True)], "nm": name, "np": len(items),
            "cix": 2, "bm": 0, "ix": g.next_ix(), "mn": "ADBE Vector Group", "hd": False}


def layer(g, ind, name, op, shapes=None, ks=None, ty=4, parent=None, st=0, ip=0, **extra):
    out = {"ddd": 0, "ind": ind, "ty": ty, "nm": name, "sr": 1, "ks": ks or transform(g), "ao": 0}
    if ty == 4:
        out["shapes"] = shapes or []
    if parent is not None:
        out["parent"] = parent
    out.update(extra)
    out.update({"ip": ip, "op": op, "st": st, "bm": 0})
    return out


def document(name, fr, op, w, h, layers, assets=(), ip=0):
    return {"v": "5.7.4", "fr": fr, "ip": ip, "op": op, "w": w, "h": h, "nm": name, "ddd": 0,
            "assets": list(assets), "layers": layers, "markers": [],
            "meta": {"g": "LottieFiles AE 3.5.6", "a": "", "k": "", "d": "", "tc": "#ffffff"}}


def circle_points(cx, cy, radius, count, wobble, r):
    return [(cx + radius * (1 + r.uniform(-wobble, wobble)) * math.cos(2 * math.pi * k / count),
             cy + radius * (1 + r.uniform(-wobble, wobble)) * math.sin(2 * math.pi * k / count))
            for k in range(count)]


def heart_points(cx, cy, size):
    pts = []
    for k in range(20):
        t = 2 * math.pi * k / 20
        x = 16 * math.sin(t) ** 3
        y = 13 * math.cos(t) - 5 * math.cos(2 * t) - 2 * math.cos(3 * t) - math.cos(4 * t)
        pts.append((cx + x * size / 32, cy - y * size / 32))
    return pts


def loader_spinner(g, op, w):
    c = w / 2
    arcs = []
    for k in range(g.r.randint(3, 6)):
        angle = 2 * math.pi * k / 6
        pts = [(c + 0.3 * w * math.cos(angle + d), c + 0.3 * w * math.sin(angle + d)) for d in (0, 0.15, 0.3, 0.45, 0.6)]
        arcs.append(group(g, [path(g, pts, closed=False), stroke(g, g.color(), g.noisy(8, 2))], name=f"Arc {k + 1}"))
    ks = transform(g, p=(c, c), a=(c, c))
    ks["r"] = g.animated([0, op - 1], [[0], [360]], eases=[LINEAR])
    return [layer(g, 1, "Spinner", op, arcs, ks)]


def bounce_ball(g, op, w):
    floor, top = w * 0.8, w * 0.2
    t = [0, op // 4, op // 2, 3 * op // 4, op - 1]
    pos = g.animated(t, [[w / 2, top, 0], [w / 2, floor, 0], [w / 2, top * 1.5, 0], [w / 2, floor, 0], [w / 2, floor, 0]],
                     eases=[SMOOTH_STOP, g.custom_ease(), SMOOTH_STOP, EASE_IN_OUT])
    squash = g.animated(t, [[100, 100, 100], [120, 80, 100], [100, 100, 100], [115, 85, 100], [100, 100, 100]],
                        eases=[g.per_dim_ease() for _ in range(4)])
    ks = transform(g)
    ks["p"], ks["s"] = pos, squash
    ball = group(g, [ellipse(g, (0, 0), (g.noisy(60, 10),) * 2), fill(g, g.color())], name="Ball")
    shadow = group(g, [ellipse(g, (w / 2, floor + 40), (80, 14)), fill(g, [0, 0, 0, 1], o=30)], name="Shadow")
    return [layer(g, 1, "Ball", op, [ball], ks), layer(g, 2, "Shadow", op, [shadow])]


def heart_pulse(g, op, w):
    pts = heart_points(0, 0, w * 0.5)
    ks = transform(g, p=(w / 2, w / 2))
    ks["s"] = g.animated([0, op // 3, 2 * op // 3, op - 1],
                         [[100, 100, 100], [118, 118, 100], [96, 96, 100], [100, 100, 100]],
                         eases=[OVERSHOOT, BOUNCE, EASE_IN_OUT])
    heart = group(g, [path(g, pts, smooth=0.5), fill(g, g.color(), animated_to=g.color(), op=op)], name="Heart")
    return [layer(g, 1, "Heart", op, [heart], ks)]


def progress_bar(g, op, w):
    bw, bh = w * 0.8, w * 0.08
    track = group(g, [rect(g, (w / 2, w / 2), (bw, bh), r=bh / 2), fill(g, [0.9, 0.9, 0.9, 1])], name="Track")
    bar = rect(g, (w / 2, w / 2), (0, bh), r=bh / 2)
    bar["s"] = g.animated([0, op // 2, op - 1], [[0, bh], [bw * 0.6, bh], [bw, bh]],
                          eases=[g.per_dim_ease(), g.per_dim_ease()])
    bar_group = group(g, [bar, gfill(g, (-bw / 2, 0), (bw / 2, 0))], name="Bar")
    return [layer(g, 1, "Bar", op, [bar_group]), layer(g, 2, "Track", op, [track])]


def checkmark(g, op, w):
    c = w / 2
    tick = path(g, [(c - w * 0.18, c), (c - w * 0.04, c + w * 0.14), (c + w * 0.2, c - w * 0.12)],
                smooth=0.0, closed=False)
    width = g.animated([0, op // 3, op - 1], [[0], [g.noisy(14, 2)], [g.noisy(10, 2)]])
    check = group(g, [tick, stroke(g, [1, 1, 1, 1], 10, width_prop=width)], name="Check")
    disc = group(g, [ellipse(g, (c, c), (w * 0.7, w * 0.7)), fill(g, g.color())], name="Disc")
    ks = transform(g)
    ks["o"] = g.animated([0, op // 4, op - 1], [[0], [100], [100]], holds=(0,))
    return [layer(g, 1, "Check", op, [check], ks), layer(g, 2, "Disc", op, [disc])]


def star_burst(g, op, w):
    c = w / 2
    rays = []
    for k in range(g.r.randint(3, 5)):
        tr = transform(g, p=(c, c), a=(c, c), group=True)
        peak = g.r.uniform(105, 130)
        tr["s"] = g.animated([k * 4, k * 4 + op // 3, op - 1], [[0, 0], [peak, peak], [100, 100]])
        rays.append(group(g, [star(g, (c, c), g.noisy(w * 0.3, 3), g.noisy(w * 0.12, 2), g.r.randint(5, 8)),
                              rounded(g, g.noisy(6, 1)), fill(g, g.color())], tr, name=f"Star {k + 1}"))
    rays.append(group(g, [star(g, (c, c), w * 0.1, 0, 6, polygon=True), fill(g, g.color())], name="Core"))
    ks = transform(g, p=(c, c), a=(c, c))
    ks["r"] = g.animated([0, op - 1], [[0], [g.noisy(180, 30)]])
    return [layer(g, 1, "Burst", op, rays, ks)]


def gradient_orb(g, op, w):
    c = w / 2
    orb = group(g, [ellipse(g, (c, c), (w * 0.6, w * 0.6)), gfill(g, (c, c), (c + w * 0.3, c), radial=True)],
                name="Orb")
    ring = group(g, [ellipse(g, (c, c), (w * 0.75, w * 0.75)), gstroke(g, (c - w * 0.4, c), (c + w * 0.4, c), 6)],
                 name="Ring")
    ks = transform(g)
    ks["o"] = g.animated([0, op // 2, op - 1], [[60], [100], [60]])
    return [layer(g, 1, "Orb", op, [orb], ks), layer(g, 2, "Ring", op, [ring])]


def bell(g, op, w):
    c = w / 2
    body = circle_points(0, 0, w * 0.25, 14, 0.15, g.r)
    bell_group = group(g, [path(g, body, smooth=0.45), fill(g, g.color()), stroke(g, [0, 0, 0, 1], 3)], name="Bell")
    null_ks = transform(g, p=(c, c * 0.6))
    null_ks["r"] = g.animated([0, 6, 12, 18, 24, op - 1], [[0], [18], [-14], [8], [-4], [0]])
    return [layer(g, 1, "Pivot", op, ty=3, ks=null_ks),
            layer(g, 2, "Bell", op, [bell_group], transform(g, p=(0, w * 0.2)), parent=1)]


def toggle(g, op, w):
    c = w / 2
    knob = ellipse(g, (0, 0), (w * 0.2, w * 0.2))
    knob_group = group(g, [knob, fill(g, [1, 1, 1, 1])], name="Knob")
    ks = transform(g)
    ks["p"] = g.animated([0, op // 3, 2 * op // 3, op - 1],
                         [[c - w * 0.12, c], [c + w * 0.12, c], [c + w * 0.12, c], [c - w * 0.12, c]],
                         holds=(1,))
    track = group(g, [rect(g, (c, c), (w * 0.5, w * 0.26)), rounded(g, w * 0.13),
                      fill(g, g.color(), animated_to=g.color(), op=op)], name="Track")
    return [layer(g, 1, "Knob", op, [knob_group], ks), layer(g, 2, "Track", op, [track])]


def wave_dots(g, op, w):
    layers = []
    for k in range(3):
        x = w * (0.3 + 0.2 * k)
        ks = transform(g)
        ks["p"] = g.animated([0, op // 3, 2 * op // 3], [[x, w / 2], [x, w * 0.35], [x, w / 2]],
                             eases=[SOFT_EASE, SOFT_EASE])
        dot = group(g, [ellipse(g, (0, 0), (w * 0.1, w * 0.1)), fill(g, g.color())], name=f"Dot {k + 1}")
        layers.append(layer(g, k + 1, f"Dot {k + 1}", op, [dot], ks, st=k * 4))
    return layers


def confetti(g, op, w):
    layers = []
    for k in range(g.r.randint(3, 5)):
        items = []
        for j in range(g.r.randint(2, 4)):
            piece = rect(g, (0, 0), (g.noisy(12, 4), g.noisy(6, 2))) if j % 2 else star(
                g, (0, 0), g.noisy(8, 2), g.noisy(4, 1), 5)
            tr = transform(g, group=True)
            dx, dy = g.r.uniform(-0.1, 0.1) * w, g.r.uniform(-0.1, 0.1) * w
            tr["p"] = g.animated([0, op // 2, op - 1], [[dx, dy], [dx * 2.5, dy * 1.5], [dx * 3, dy * 4]])
            tr["r"] = g.animated([0, op - 1], [[g.r.uniform(-45, 45)], [g.r.uniform(-360, 360)]])
            inner = group(g, [piece, fill(g, g.color())], tr, name=f"Piece {j + 1}")
            items.append(inner)
        ks = transform(g)
        start = [g.noisy(w / 2, w * 0.1), g.noisy(w * 0.1, 10)]
        end = [g.noisy(w / 2, w * 0.4), g.noisy(w * 0.9, 10)]
        ks["p"] = g.animated([0, op - 1], [start, end])
        ks["r"] = g.maybe_animated([0], op, 180, 0.8)
        layers.append(layer(g, k + 1, f"Burst {k + 1}", op, [group(g, items, name="Pieces")], ks))
    return layers


def blob_morph(g, op, w):
    c = w / 2
    a = circle_points(c, c, w * 0.3, 10, 0.2, g.r)
    b = circle_points(c, c, w * 0.3, 10, 0.2, g.r)
    blob = group(g, [path(g, a, smooth=0.5, morph_to=b, op=op), fill(g, g.color())], name="Blob")
    return [layer(g, 1, "Blob", op, [blob])]


def illustration(g, op, w):
    c = w / 2
    parts = []
    for k in range(g.r.randint(3, 5)):
        cx, cy = g.r.uniform(0.3, 0.7) * w, g.r.uniform(0.3, 0.7) * w
        outline = circle_points(cx, cy, w * g.r.uniform(0.08, 0.25), g.r.randint(12, 24), 0.25, g.r)
        items = [path(g, outline, smooth=0.4), fill(g, g.color())]
        if k % 2:
            items.insert(1, stroke(g, g.color(), g.noisy(2, 0.5)))
        parts.append(group(g, items, name=f"Shape {k + 1}"))
    ks = transform(g, p=(c, c), a=(c, c))
    ks["p"] = g.animated([0, op // 2, op - 1], [[c, c], [c, c - w * 0.04], [c, c]], eases=[SOFT_EASE, SOFT_EASE])
    return [layer(g, 1, "Illustration", op, parts, ks)]


def card_precomp(g, op, w):
    c = w / 2
    inner = [layer(g, 1, "Badge", op, [group(g, [star(g, (c, c), w * 0.2, w * 0.1, 5), fill(g, g.color())])]),
             layer(g, 2, "Plate", op, [group(g, [rect(g, (c, c), (w * 0.6, w * 0.4), r=12), fill(g, g.color())])])]
    assets = [{"id": "comp_0", "nm": "Card", "fr": 30, "layers": inner},
              {"id": "image_0", "w": 64, "h": 64, "u": "images/", "p": "img_0.png", "e": 0}]
    ks = transform(g, p=(c, c), a=(c, c))
    ks["s"] = g.animated([0, op // 2], [[80, 80, 100], [100, 100, 100]], eases=[OVERSHOOT])
    return ([layer(g, 1, "Card", op, ty=0, ks=ks, refId="comp_0", w=w, h=w),
             layer(g, 2, "Icon", op, ty=2, refId="image_0", ks=transform(g, p=(c, w * 0.2))),
             layer(g, 3, "Backdrop", op, ty=1, sc="#1e1e2e", sw=w, sh=w)], assets)


THEMES = [loader_spinner, bounce_ball, heart_pulse, progress_bar, checkmark, star_burst,
          gradient_orb, bell, toggle, wave_dots, confetti, blob_morph, illustration, card_precomp]


def write_json(path, value):
    path.write_text(json.dumps(value, indent=2) + "\n")


def build_corpus():
    out = ROOT / "corpus"
    shutil.rmtree(out, ignore_errors=True)
    out.mkdir()
    for n, theme in enumerate(THEMES):
        for variant in range(4):
            g = Gen(1000 * n + variant)
            fr = g.r.choice([24, 25, 30, 60])
            op = g.r.choice([30, 45, 60, 90, 120, 180])
            w = g.r.choice([200, 256, 400, 512])
            made = theme(g, op, w)
            layers, assets = made if isinstance(made, tuple) else (made, [])
            name = theme.__name__
            write_json(out / f"{name}_{variant + 1}.json", document(f"{name} {variant + 1}", fr, op, w, w, layers, assets))


# (file, fr, ip, op); durations hit every bucket edge.
STATS_SET = [
    ("a01", 30, 0, 15), ("a02", 30, 0, 29), ("a03", 30, 0, 30), ("a04", 24, 0, 36),
    ("a05", 60, 0, 90), ("a06", 30, 10, 70), ("a07", 25, 0, 60), ("a08", 30, 0, 75),
    ("a09", 30, 0, 90), ("a10", 24, 0, 96), ("a11", 30, 0, 120), ("a12", 30, 0, 149),
    ("a13", 30, 0, 150), ("a14", 60, 0, 420), ("a15", 30, 0, 270), ("a16", 30, 0, 299),
    ("a17", 30, 0, 300), ("a18", 24, 0, 480), ("a19", 30, 0, 0), ("a20", 30, 30, 630),
]
BUCKETS = [(0, 1, "0-1s"), (1, 2, "1-2s"), (2, 3, "2-3s"), (3, 5, "3-5s"), (5, 10, "5-10s"), (10, math.inf, "10s+")]


def build_stats():
    out = ROOT / "stats"
    shutil.rmtree(out, ignore_errors=True)
    out.mkdir()
    frames, durations = [], []
    for n, (name, fr, ip, op) in enumerate(STATS_SET):
        g = Gen(n)
        dot = group(g, [ellipse(g, (50, 50), (20, 20)), fill(g, [1, 0, 0, 1])])
        write_json(out / f"{name}.json", document(name, fr, op, 100, 100, [layer(g, 1, "Dot", op, [dot], ip=ip)], ip=ip))
        frames.append(op - ip)
        durations.append((op - ip) / fr)
    (out / "zz_broken.json").write_text('{"v": "5.7.4", "fr": 30, "layers": [\n')
    durations_sorted = sorted(durations)
    frames_sorted = sorted(frames)
    mid = len(durations) // 2
    expected = {
        "files": len(STATS_SET),
        "failed": 1,
        "total_frames": sum(frames),
        "mean_frames": sum(frames) / len(frames),
        "median_frames": (frames_sorted[mid - 1] + frames_sorted[mid]) / 2,
        "total_duration_s": sum(durations),
        "mean_duration_s": sum(durations) / len(durations),
        "median_duration_s": (durations_sorted[mid - 1] + durations_sorted[mid]) / 2,
        "histogram": [{"label": label, "count": sum(lo <= d < hi for d in durations)} for lo, hi, label in BUCKETS],
    }
    write_json(ROOT / "stats_expected.json", expected)


SVG = {
    "rect.svg": '<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 100 100">'
                '<rect x="10" y="20" width="30" height="40" fill="#ff0000"/></svg>',
    "circle.svg": '<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 100 100">'
                  '<circle cx="50" cy="50" r="10"/></svg>',
    "badge.svg": '<svg xmlns="http://www.w3.org/2000/svg" width="200" height="200" viewBox="0 0 100 100">'
                 '<defs><linearGradient id="g" x1="0" y1="0" x2="1" y2="1">'
                 '<stop offset="0" stop-color="#336699"/><stop offset="1" stop-color="#99ccff"/></linearGradient></defs>'
                 '<g transform="translate(50 50) rotate(30)" opacity="0.9">'
                 '<rect x="-30" y="-30" width="60" height="60" rx="8" fill="url(#g)"/>'
                 '<ellipse cx="0" cy="0" rx="18" ry="10" fill="none" stroke="#ffffff" stroke-width="3"/></g>'
                 '<path d="M10 90 Q50 70 90 90 A 40 10 0 0 1 10 90 Z" fill="#222" fill-rule="evenodd"/></svg>',
    "icon.svg": '<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 24 24">'
                '<path d="M12 2 L15 9 L22 9 L16.5 13.5 L18.5 21 L12 16.5 L5.5 21 L7.5 13.5 L2 9 L9 9 Z" '
                'style="fill:#f5c518;stroke:#7a5c00;stroke-width:1;stroke-linejoin:round"/>'
                '<circle cx="12" cy="12" r="2" transform="scale(1 1.5) translate(0 -4)" fill="#000"/></svg>',
}
UNSUPPORTED_SVG = {
    "filter.svg": '<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 10 10"><defs><filter id="f"/></defs>'
                  '<rect width="5" height="5" filter="url(#f)"/></svg>',
    "text.svg": '<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 10 10"><text x="1" y="5">hi</text></svg>',
    "radial.svg": '<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 10 10"><defs><radialGradient id="r">'
                  '<stop offset="0" stop-color="#fff"/></radialGradient></defs><circle cx="5" cy="5" r="4" fill="url(#r)"/></svg>',
    "dashed.svg": '<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 10 10">'
                  '<path d="M0 0 L10 10" stroke="#000" stroke-dasharray="2 1"/></svg>',
    "animated.svg": '<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 10 10"><rect width="5" height="5">'
                    '<animate attributeName="x" from="0" to="5" dur="1s"/></rect></svg>',
}


def build_svg():
    out = ROOT / "svg"
    shutil.rmtree(out, ignore_errors=True)
    (out / "unsupported").mkdir(parents=True)
    for name, text in SVG.items():
        (out / name).write_text(text + "\n")
    for name, text in UNSUPPORTED_SVG.items():
        (out / "unsupported" / name).write_text(text + "\n")


if __name__ == "__main__":
    build_corpus()
    build_stats()
    build_svg()
