#!/usr/bin/env python3
"""Writes the deterministic data fixtures under data/."""
import csv
import json
import math
import os
import random
import sys

out = sys.argv[1] if len(sys.argv) > 1 else os.path.join(os.path.dirname(__file__), "..", "data")
os.makedirs(out, exist_ok=True)


def bike_spots(path):
    """Bike parking spots in San Francisco, clustered around neighborhoods, with a usage frequency."""
    rng = random.Random(7)
    centers = [(-122.4194, 37.7749, 0.012), (-122.4010, 37.7880, 0.008), (-122.4330, 37.7610, 0.010),
               (-122.4470, 37.7700, 0.009), (-122.4100, 37.7600, 0.007), (-122.3950, 37.7780, 0.006)]
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["lng", "lat", "spaces", "name"])
        for i in range(1500):
            cx, cy, s = centers[rng.randrange(len(centers))]
            lng = cx + rng.gauss(0, s)
            lat = cy + rng.gauss(0, s * 0.8)
            spaces = max(2, int(rng.expovariate(1 / 8)) + 2)
            w.writerow([f"{lng:.6f}", f"{lat:.6f}", min(spaces, 40), f"spot {i}"])


def wind_stations(path):
    """Scattered stations over the contiguous US sampling a smooth synthetic wind field (m/s)."""
    rng = random.Random(11)
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["lng", "lat", "vx", "vy", "vz"])
        corners = [(-124.5, 25.0), (-124.5, 49.0), (-67.0, 25.0), (-67.0, 49.0)]
        points = corners + [(rng.uniform(-124.5, -67.0), rng.uniform(25.0, 49.0)) for _ in range(96)]
        for lng, lat in points:
            u = (lng + 96.0) / 28.0
            v = (lat - 37.0) / 12.0
            vx = 9.0 + 6.0 * math.sin(2.2 * v) - 3.0 * v * u
            vy = 5.0 * math.sin(1.7 * u) + 2.0 * math.cos(1.3 * v)
            vz = 0.4 * math.sin(u + v)
            w.writerow([f"{lng:.4f}", f"{lat:.4f}", f"{vx:.4f}", f"{vy:.4f}", f"{vz:.4f}"])


def graph(path):
    """A small social network with three communities and a few bridges."""
    rng = random.Random(3)
    names = ["Ada", "Ben", "Cai", "Dee", "Eli", "Fay", "Gus", "Hal", "Ivy", "Jon", "Kim", "Lou", "Max", "Nia",
             "Oto", "Pam", "Quin", "Rae", "Sol", "Tia", "Uma", "Vic", "Wes", "Xia", "Yan", "Zed", "Ari", "Bo",
             "Cy", "Dot", "Eve", "Flo", "Gia", "Huw", "Ike", "Joy"]
    groups = [i % 3 for i in range(len(names))]
    nodes = [{"id": f"n{i}", "label": n, "group": groups[i]} for i, n in enumerate(names)]
    edges = set()
    members = [[i for i in range(len(names)) if groups[i] == g] for g in range(3)]
    for m in members:
        for k in range(1, len(m)):
            edges.add((m[rng.randrange(k)], m[k]))
        for _ in range(len(m) // 2):
            a, b = rng.sample(m, 2)
            edges.add((min(a, b), max(a, b)))
    edges.update({(0, 1), (1, 2), (2, 0), (9, 13)})
    data = {"nodes": nodes, "edges": [{"source": f"n{a}", "target": f"n{b}"} for a, b in sorted(edges)]}
    with open(path, "w") as f:
        json.dump(data, f, indent=1)
        f.write("\n")


def mixed_geojson(path):
    """Points, lines and polygons (one with a hole) around San Francisco."""
    fc = {"type": "FeatureCollection", "features": [
        {"type": "Feature", "properties": {"name": "Ferry Building"},
         "geometry": {"type": "Point", "coordinates": [-122.3937, 37.7955]}},
        {"type": "Feature", "properties": {"name": "Stations"},
         "geometry": {"type": "MultiPoint", "coordinates": [[-122.4194, 37.7749], [-122.4330, 37.7610]]}},
        {"type": "Feature", "properties": {"name": "Market Street"},
         "geometry": {"type": "LineString",
                      "coordinates": [[-122.3950, 37.7940], [-122.4060, 37.7860], [-122.4190, 37.7770]]}},
        {"type": "Feature", "properties": {"name": "Two routes"},
         "geometry": {"type": "MultiLineString",
                      "coordinates": [[[-122.45, 37.77], [-122.44, 37.775]], [[-122.41, 37.76], [-122.40, 37.765],
                                                                              [-122.39, 37.763]]]}},
        {"type": "Feature", "properties": {"name": "Park with pond"},
         "geometry": {"type": "Polygon", "coordinates": [
             [[-122.511, 37.765], [-122.454, 37.765], [-122.454, 37.774], [-122.511, 37.774], [-122.511, 37.765]],
             [[-122.49, 37.768], [-122.48, 37.768], [-122.48, 37.771], [-122.49, 37.771], [-122.49, 37.768]]]}},
        {"type": "Feature", "properties": {"name": "Blocks"},
         "geometry": {"type": "MultiPolygon", "coordinates": [
             [[[-122.42, 37.79], [-122.41, 37.79], [-122.41, 37.795], [-122.42, 37.79]]],
             [[[-122.43, 37.80], [-122.425, 37.80], [-122.425, 37.805], [-122.43, 37.805], [-122.43, 37.80]]]]}},
    ]}
    with open(path, "w") as f:
        json.dump(fc, f, indent=1)
        f.write("\n")


bike_spots(os.path.join(out, "bike_spots.csv"))
wind_stations(os.path.join(out, "wind_stations.csv"))
graph(os.path.join(out, "graph.json"))
mixed_geojson(os.path.join(out, "mixed.geojson"))
