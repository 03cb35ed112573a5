#!/usr/bin/env python3
"""Regenerates the bundled CLEVR-format fixtures under fixtures/.

Scenes carry 2D positions from which left/right/front/behind lists are
derived the way CLEVR stores them: relationships[r][i] lists the objects
that are r of object i. Answers come from a direct set-semantics executor
below; the C++ test suite checks them against its own oracle.
"""

import json
import pathlib

ROOT = pathlib.Path(__file__).resolve().parent.parent / "fixtures"

SCENES = [
    [  # scene 0
        ("large", "red", "metal", "cube", -2.0, 1.0),
        ("small", "blue", "rubber", "sphere", 1.0, -1.0),
        ("large", "green", "rubber", "cylinder", 0.0, 2.0),
        ("small", "red", "rubber", "sphere", 2.0, 0.5),
        ("large", "purple", "metal", "cube", -1.0, -2.0),
    ],
    [  # scene 1
        ("small", "gray", "metal", "cylinder", 0.0, 0.0),
        ("large", "gray", "rubber", "cube", 1.5, 1.0),
        ("small", "yellow", "metal", "sphere", -1.5, -1.0),
    ],
    [  # scene 2
        ("large", "cyan", "rubber", "sphere", -2.5, 0.0),
        ("small", "brown", "metal", "cube", -1.0, 1.5),
        ("large", "brown", "rubber", "cylinder", 0.5, -1.0),
        ("small", "cyan", "metal", "cube", 1.5, 0.5),
        ("large", "green", "metal", "sphere", 2.5, -2.0),
        ("small", "green", "rubber", "cylinder", 0.0, 2.5),
    ],
]

# The worked count-comparison example: one large green thing, one large
# purple metal cube.
PAPER_SCENE = [
    ("large", "green", "rubber", "sphere", -1.0, 0.0),
    ("large", "purple", "metal", "cube", 1.0, 0.0),
]


def chain(*ops):
    """Builds a CLEVR program; "op[v]" carries a value input, "op@i,j" explicit inputs."""
    nodes = []
    for op in ops:
        inputs = None
        if "@" in op:
            op, ins = op.split("@")
            inputs = [int(x) for x in ins.split(",")]
        values = []
        if "[" in op:
            op, v = op[:-1].split("[")
            values = [v]
        if inputs is None:
            inputs = [] if op == "scene" else [len(nodes) - 1]
        nodes.append({"function": op, "inputs": inputs, "value_inputs": values})
    return nodes


QUESTIONS = [
    (0, "How many red things are there?",
     chain("scene", "filter_color[red]", "count")),
    (2, "How many things are cyan or green?",
     chain("scene", "filter_color[cyan]", "scene", "filter_color[green]", "union@1,3", "count")),
    (1, "How many objects are left of the large cube?",
     chain("scene", "filter_size[large]", "filter_shape[cube]", "unique", "relate[left]", "count")),
    (0, "Are there any yellow objects?",
     chain("scene", "filter_color[yellow]", "exist")),
    (2, "Is there anything made of the same material as the large green sphere?",
     chain("scene", "filter_size[large]", "filter_color[green]", "filter_shape[sphere]", "unique",
           "same_material", "exist")),
    (1, "Is there a metal thing that is left of the large cube and right of the yellow sphere?",
     chain("scene", "filter_size[large]", "filter_shape[cube]", "unique", "relate[left]",
           "scene", "filter_color[yellow]", "filter_shape[sphere]", "unique", "relate[right]",
           "intersect@4,9", "filter_material[metal]", "exist")),
    (0, "Are there more large things than small things?",
     chain("scene", "filter_size[large]", "count", "scene", "filter_size[small]", "count",
           "greater_than@2,5")),
    (2, "Are there fewer metal cubes than rubber cylinders?",
     chain("scene", "filter_material[metal]", "filter_shape[cube]", "count",
           "scene", "filter_material[rubber]", "filter_shape[cylinder]", "count", "less_than@3,7")),
    (1, "Is the number of spheres the same as the number of cubes?",
     chain("scene", "filter_shape[sphere]", "count", "scene", "filter_shape[cube]", "count",
           "equal_integer@2,5")),
    (0, "Does the blue sphere have the same size as the red sphere?",
     chain("scene", "filter_color[blue]", "filter_shape[sphere]", "unique", "query_size",
           "scene", "filter_color[red]", "filter_shape[sphere]", "unique", "query_size",
           "equal_size@4,9")),
    (2, "Is the metal sphere the same color as the small cylinder?",
     chain("scene", "filter_material[metal]", "filter_shape[sphere]", "unique", "query_color",
           "scene", "filter_size[small]", "filter_shape[cylinder]", "unique", "query_color",
           "equal_color@4,9")),
    (0, "What material is the cylinder left of the small blue sphere?",
     chain("scene", "filter_size[small]", "filter_color[blue]", "filter_shape[sphere]", "unique",
           "relate[left]", "filter_shape[cylinder]", "unique", "query_material")),
]


def scene_json(objects, image_index):
    n = len(objects)
    rels = {"left": [], "right": [], "front": [], "behind": []}
    for i in range(n):
        xi, yi = objects[i][4], objects[i][5]
        rels["left"].append([j for j in range(n) if j != i and objects[j][4] < xi])
        rels["right"].append([j for j in range(n) if j != i and objects[j][4] > xi])
        rels["front"].append([j for j in range(n) if j != i and objects[j][5] < yi])
        rels["behind"].append([j for j in range(n) if j != i and objects[j][5] > yi])
    return {
        "image_index": image_index,
        "image_filename": "FIXTURE_%06d.png" % image_index,
        "objects": [
            {"size": s, "color": c, "material": m, "shape": sh, "3d_coords": [x, y, 0.35]}
            for (s, c, m, sh, x, y) in objects
        ],
        "relationships": rels,
    }


def execute(scene, program):
    objs = scene["objects"]
    vals = []
    for node in program:
        fn, ins, v = node["function"], node["inputs"], node["value_inputs"]
        a = [vals[i] for i in ins]
        if fn == "scene":
            out = set(range(len(objs)))
        elif fn.startswith("filter_"):
            t = fn[len("filter_"):]
            out = {o for o in a[0] if objs[o][t] == v[0]}
        elif fn == "unique":
            assert len(a[0]) == 1, "unique over %d objects" % len(a[0])
            out = a[0]
        elif fn == "relate":
            out = set()
            for o in a[0]:
                out |= set(scene["relationships"][v[0]][o])
        elif fn.startswith("same_"):
            t = fn[len("same_"):]
            out = {j for o in a[0] for j in range(len(objs)) if j != o and objs[j][t] == objs[o][t]}
        elif fn == "union":
            out = a[0] | a[1]
        elif fn == "intersect":
            out = a[0] & a[1]
        elif fn == "count":
            out = len(a[0])
        elif fn == "exist":
            out = "yes" if a[0] else "no"
        elif fn == "greater_than":
            out = "yes" if a[0] > a[1] else "no"
        elif fn == "less_than":
            out = "yes" if a[0] < a[1] else "no"
        elif fn == "equal_integer":
            out = "yes" if a[0] == a[1] else "no"
        elif fn.startswith("query_"):
            t = fn[len("query_"):]
            (o,) = a[0]
            out = objs[o][t]
        elif fn.startswith("equal_"):
            out = "yes" if a[0] == a[1] else "no"
        else:
            raise ValueError(fn)
        vals.append(out)
    return str(vals[-1])


def main():
    scenes = [scene_json(objs, i) for i, objs in enumerate(SCENES)]
    questions = []
    for qi, (image, text, program) in enumerate(QUESTIONS):
        questions.append({
            "question_index": qi,
            "image_index": image,
            "question": text,
            "program": program,
            "answer": execute(scenes[image], program),
        })
    (ROOT / "clevr_scenes.json").write_text(json.dumps({"scenes": scenes}, indent=1) + "\n")
    (ROOT / "clevr_questions.json").write_text(json.dumps({"questions": questions}, indent=1) + "\n")
    (ROOT / "paper_example_scene.json").write_text(json.dumps(scene_json(PAPER_SCENE, 0), indent=1) + "\n")
    for q in questions:
        print(q["image_index"], q["answer"], q["question"])


if __name__ == "__main__":
    main()
