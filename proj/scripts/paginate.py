#!/usr/bin/env python3
# Copyright 2026 The rfclink Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#   http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Lay out plain RFC text in the published page format.

Pages hold at most 54 body lines and break only at blank lines that are
not inside a header diagram. Each page ends with a footer and a form feed;
every page after the first starts with a running banner.
"""
import argparse
import pathlib
import re

PAGE = 54
BOX = re.compile(r"^\s*[+|~/\\]")


def paginate(lines, number, author, title, date):
    pages, cur = [], []
    for i, line in enumerate(lines):
        cur.append(line)
        nxt = lines[i + 1] if i + 1 < len(lines) else ""
        breakable = line.strip() == "" and not BOX.match(nxt) and not (
            i > 0 and BOX.match(lines[i - 1]))
        if len(cur) >= PAGE - 10 and breakable:
            pages.append(cur)
            cur = []
    if cur:
        pages.append(cur)
    out = []
    for n, body in enumerate(pages, 1):
        if n > 1:
            left = f"RFC {number}"
            out.append(f"{left}{title:^{72 - len(left) - len(date)}}{date}")
            out.append("")
        out.extend(body)
        out.append("")
        footer = f"[Page {n}]"
        out.append(f"{author:<{72 - len(footer)}}{footer}")
        out.append("\f")
    return "\n".join(out) + "\n"


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("source", type=pathlib.Path)
    ap.add_argument("out", type=pathlib.Path)
    args = ap.parse_args()
    lines = args.source.read_text().splitlines()
    number = int(args.source.stem)
    author = lines[0].split()[-1] if lines else "Author"
    title = next((l.strip() for l in lines[5:15] if l.startswith("   ") and l.strip()), "")[:40]
    m = re.search(r"(January|February|March|April|May|June|July|August|September"
                  r"|October|November|December) \d{4}", "\n".join(lines[:10]))
    date = m.group(0) if m else ""
    args.out.write_text(paginate(lines, number, author, title, date))


if __name__ == "__main__":
    main()
