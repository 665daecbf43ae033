#!/usr/bin/env python3
# Copyright 2026 The sgrl Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Regenerates the bundled map fixtures in data/maps (deterministic)."""

import os
import random
import sys


def blank(w, h):
    return [[False] * w for _ in range(h)]


def rect(g, x0, y0, x1, y1, value=True):
    for y in range(max(0, y0), min(len(g), y1 + 1)):
        for x in range(max(0, x0), min(len(g[0]), x1 + 1)):
            g[y][x] = value


def save(g, path):
    with open(path, "w") as f:
        f.write("type octile\nheight %d\nwidth %d\nmap\n" % (len(g), len(g[0])))
        for row in g:
            f.write("".join("@" if c else "." for c in row) + "\n")


def rooms(w, h, room, door, seed, furniture=0):
    """Grid of square rooms joined by doors in shared walls."""
    rng = random.Random(seed)
    g = blank(w, h)
    for x in range(0, w, room):
        rect(g, x, 0, x, h - 1)
    for y in range(0, h, room):
        rect(g, 0, y, w - 1, y)
    rect(g, w - 1, 0, w - 1, h - 1)
    rect(g, 0, h - 1, w - 1, h - 1)
    for y in range(0, h - room, room):
        for x in range(0, w - room, room):
            # door east and door south of each room
            if x + room < w - 1:
                d = rng.randrange(y + 1, y + room - door)
                rect(g, x + room, d, x + room, d + door - 1, False)
            if y + room < h - 1:
                d = rng.randrange(x + 1, x + room - door)
                rect(g, d, y + room, d + door - 1, y + room, False)
            for _ in range(furniture):
                fw, fh = rng.randint(1, room // 4), rng.randint(1, room // 4)
                fx = rng.randrange(x + 3, x + room - fw - 2)
                fy = rng.randrange(y + 3, y + room - fh - 2)
                rect(g, fx, fy, fx + fw - 1, fy + fh - 1)
    return g


def maze(w, h, corridor, seed):
    """Perfect maze with corridors `corridor` cells wide and 1-cell walls."""
    rng = random.Random(seed)
    pitch = corridor + 1
    cw, ch = (w - 1) // pitch, (h - 1) // pitch
    g = [[True] * w for _ in range(h)]

    def carve_cell(cx, cy):
        rect(g, 1 + cx * pitch, 1 + cy * pitch,
             cx * pitch + corridor, cy * pitch + corridor, False)

    seen = {(0, 0)}
    stack = [(0, 0)]
    carve_cell(0, 0)
    while stack:
        cx, cy = stack[-1]
        nbrs = [(cx + dx, cy + dy) for dx, dy in ((1, 0), (-1, 0), (0, 1), (0, -1))
                if 0 <= cx + dx < cw and 0 <= cy + dy < ch and (cx + dx, cy + dy) not in seen]
        if not nbrs:
            stack.pop()
            continue
        nx, ny = rng.choice(nbrs)
        seen.add((nx, ny))
        carve_cell(nx, ny)
        rect(g, 1 + min(cx, nx) * pitch, 1 + min(cy, ny) * pitch,
             max(cx, nx) * pitch + corridor, max(cy, ny) * pitch + corridor, False)
        stack.append((nx, ny))
    # a few loops so shortest paths are not unique
    for _ in range(cw * ch // 10):
        cx, cy = rng.randrange(cw - 1), rng.randrange(ch - 1)
        if rng.random() < 0.5:
            rect(g, (cx + 1) * pitch, 1 + cy * pitch, (cx + 1) * pitch, cy * pitch + corridor, False)
        else:
            rect(g, 1 + cx * pitch, (cy + 1) * pitch, cx * pitch + corridor, (cy + 1) * pitch, False)
    return g


def scatter(w, h, count, max_side, seed):
    """Random axis-aligned blocks on an open floor."""
    rng = random.Random(seed)
    g = blank(w, h)
    for _ in range(count):
        bw, bh = rng.randint(1, max_side), rng.randint(1, max_side)
        x, y = rng.randrange(w - bw), rng.randrange(h - bh)
        rect(g, x, y, x + bw - 1, y + bh - 1)
    return g


def building(seed):
    """256x256 floor plan: wide corridors, large rooms with wide doorways."""
    rng = random.Random(seed)
    w = h = 256
    g = blank(w, h)
    rect(g, 0, 0, w - 1, 1)
    rect(g, 0, h - 2, w - 1, h - 1)
    rect(g, 0, 0, 1, h - 1)
    rect(g, w - 2, 0, w - 1, h - 1)
    # rooms laid out in bands separated by 14-cell corridors
    bands = [(2, 70), (84, 170), (184, 253)]
    for y0, y1 in bands:
        x = 2
        while x < w - 40:
            rw = rng.randint(50, 70)
            x1 = min(x + rw, w - 3)
            rect(g, x, y0, x1, y0 + 1)
            rect(g, x, y1 - 1, x1, y1)
            rect(g, x, y0, x + 1, y1)
            rect(g, x1 - 1, y0, x1, y1)
            # doorways 12 wide on the corridor sides
            for yy, side in ((y0, 0), (y1 - 1, 1)):
                if (y0 > 2 and side == 0) or (y1 < h - 3 and side == 1):
                    d = rng.randint(x + 8, x1 - 20)
                    rect(g, d, yy, d + 11, yy + 1, False)
            # doorway into the neighbouring room
            d = rng.randint(y0 + 10, y1 - 24)
            rect(g, x1 - 1, d, x1, d + 11, False)
            # furniture: a few blocks kept clear of the walls
            for _ in range(rng.randint(1, 3)):
                bw, bh = rng.randint(2, 6), rng.randint(2, 6)
                bx = rng.randint(x + 14, max(x + 14, x1 - 14 - bw))
                by = rng.randint(y0 + 14, max(y0 + 14, y1 - 14 - bh))
                rect(g, bx, by, bx + bw - 1, by + bh - 1)
            x = x1 + 1
    # pillars in the corridors
    for y0, y1 in ((70, 84), (170, 184)):
        for x in range(30, w - 30, 48):
            rect(g, x, y0 + 6, x + 1, y0 + 7)
    return g


def office():
    """50x50 office: two rows of rooms off a central corridor, with desks."""
    g = blank(50, 50)
    rect(g, 0, 0, 49, 0)
    rect(g, 0, 49, 49, 49)
    rect(g, 0, 0, 0, 49)
    rect(g, 49, 0, 49, 49)
    rect(g, 1, 20, 48, 20)
    rect(g, 1, 29, 48, 29)
    for x in (16, 33):
        rect(g, x, 1, x, 19)
        rect(g, x, 30, x, 48)
    for x0 in (1, 17, 34):
        rect(g, x0 + 6, 20, x0 + 9, 20, False)
        rect(g, x0 + 5, 29, x0 + 8, 29, False)
    desks = [(4, 5, 8, 6), (4, 12, 8, 13), (21, 6, 27, 7), (23, 13, 24, 16),
             (38, 4, 39, 9), (43, 12, 46, 13), (5, 35, 6, 41), (10, 43, 13, 44),
             (21, 34, 28, 35), (21, 42, 25, 43), (38, 36, 45, 37), (40, 43, 41, 46)]
    for d in desks:
        rect(g, *d)
    rect(g, 24, 24, 25, 25)  # a column in the corridor
    return g


def main(out_dir):
    os.makedirs(out_dir, exist_ok=True)
    save(rooms(128, 128, 16, 3, seed=1, furniture=1), os.path.join(out_dir, "rooms128.map"))
    save(maze(161, 161, 3, seed=2), os.path.join(out_dir, "maze161.map"))
    save(scatter(256, 256, 900, 6, seed=3), os.path.join(out_dir, "scatter256.map"))
    save(rooms(512, 512, 32, 4, seed=4, furniture=2), os.path.join(out_dir, "rooms512.map"))
    save(building(seed=5), os.path.join(out_dir, "building256.map"))
    save(office(), os.path.join(out_dir, "office50.map"))


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else
         os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "data", "maps"))
