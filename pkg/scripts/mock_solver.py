"""Stand-in for an external hMETIS-style partitioner, used by tests and smoke configs.

usage: mock_solver.py INPUT OUTPUT K [--mode MODE]

modes:
  roundrobin  write vertex i -> i mod k (default)
  badblock    write block id k for the last vertex
  short       write one line fewer than there are vertices
  fail        exit with status 3 without writing
  hang        sleep far longer than any sane timeout
  nofile      exit 0 without writing
"""

import argparse
import sys
import time


def main(argv=None):
    p = argparse.ArgumentParser()
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("k", type=int)
    p.add_argument("--mode", default="roundrobin")
    args = p.parse_args(argv)

    with open(args.input) as f:
        header = next(line for line in f if not line.startswith("%")).split()
    n = int(header[1])

    if args.mode == "fail":
        print("mock solver: deliberate failure", file=sys.stderr)
        return 3
    if args.mode == "hang":
        time.sleep(600)
        return 0
    if args.mode == "nofile":
        return 0
    blocks = [i % args.k for i in range(n)]
    if args.mode == "badblock":
        blocks[-1] = args.k
    elif args.mode == "short":
        blocks = blocks[:-1]
    with open(args.output, "w") as f:
        f.writelines(f"{b}\n" for b in blocks)
    return 0


if __name__ == "__main__":
    sys.exit(main())
