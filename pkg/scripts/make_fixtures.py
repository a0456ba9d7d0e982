"""Regenerate the mock-provider fixture corpus under fixtures/.

Fixture files hold the raw completion text the mock provider returns for
each (stage, ordinal) pair. The novel set drives the novel-writing demo
end to end; each malformed scenario pairs a bad first reply with a valid
repair reply (or only bad replies, to exercise repair exhaustion).
"""

from __future__ import annotations

import json
import shutil
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"

GOAL = "Write a novel about the awakening of artificial intelligence"

BOARD = [
    {
        "name": "Futurist",
        "profile": "A futurist who studies long-range technological and social change and sketches plausible futures.",
    },
    {
        "name": "Science Fiction Writer",
        "profile": "Isabella, a science fiction writer known for character-driven stories about technology and society.",
    },
    {
        "name": "Literary Editor",
        "profile": "Carlos, a literary editor who reviews drafts for structure, pacing, and clarity.",
    },
    {
        "name": "AI Scientist",
        "profile": "A researcher in machine intelligence with a deep background in learning systems and their limits.",
    },
    {
        "name": "AI Engineer",
        "profile": "An engineer who builds and deploys large AI systems in production.",
    },
    {
        "name": "Poet",
        "profile": "A poet with a gift for imagery, rhythm, and emotional resonance.",
    },
    {
        "name": "Cognitive Physiologist",
        "profile": "A cognitive physiologist studying how minds arise from physical processes.",
    },
]

PLAN = {
    "tasks": [
        {
            "stepName": "Theme Selection",
            "taskContent": "Choose the central theme the novel will explore and state it in one paragraph.",
            "inputObjects": [],
            "outputObject": "Main Theme",
        },
        {
            "stepName": "Character Design",
            "taskContent": "Design the main characters, their motivations, and their relationships to the theme.",
            "inputObjects": ["Main Theme"],
            "outputObject": "Character List",
        },
        {
            "stepName": "Plot Development",
            "taskContent": "Develop the full plot arc from inciting incident to resolution.",
            "inputObjects": ["Main Theme", "Character List"],
            "outputObject": "Plot Design",
        },
        {
            "stepName": "Writing Draft",
            "taskContent": "Write a complete draft of the novel following the plot design.",
            "inputObjects": ["Plot Design"],
            "outputObject": "Novel Draft",
        },
        {
            "stepName": "Review and Editing",
            "taskContent": "Review the draft, fix structural and stylistic problems, and deliver the final text.",
            "inputObjects": ["Novel Draft"],
            "outputObject": "Final Novel",
        },
    ]
}

TEAMS = [
    {"team": ["Futurist", "Science Fiction Writer"]},
    {"team": ["Science Fiction Writer", "Cognitive Physiologist"]},
    {"team": ["Futurist", "Science Fiction Writer"]},
    {"team": ["Science Fiction Writer", "Poet"]},
    {"team": ["Literary Editor", "Science Fiction Writer"]},
]

PROCESSES = [
    {
        "actions": [
            {
                "agent": "Futurist",
                "instruction": "Propose three candidate themes about machine awakening with a short pitch for each.",
                "interactionType": "propose",
                "importantInputs": [],
            },
            {
                "agent": "Science Fiction Writer",
                "instruction": "Critique the candidate themes for narrative potential and emotional stakes.",
                "interactionType": "critique",
                "importantInputs": [{"kind": "action", "index": 0}],
            },
            {
                "agent": "Science Fiction Writer",
                "instruction": "Select the strongest theme and deliver it as one decisive paragraph.",
                "interactionType": "finalize",
                "importantInputs": [{"kind": "action", "index": 0}, {"kind": "action", "index": 1}],
            },
        ]
    },
    {
        "actions": [
            {
                "agent": "Science Fiction Writer",
                "instruction": "Draft the main characters and their arcs grounded in the chosen theme.",
                "interactionType": "propose",
                "importantInputs": [{"kind": "keyObject", "name": "Main Theme"}],
            },
            {
                "agent": "Cognitive Physiologist",
                "instruction": "Refine the AI character's inner life so its awakening feels cognitively plausible.",
                "interactionType": "improve",
                "importantInputs": [{"kind": "action", "index": 0}],
            },
            {
                "agent": "Science Fiction Writer",
                "instruction": "Deliver the final character list with one-line bios.",
                "interactionType": "finalize",
                "importantInputs": [{"kind": "action", "index": 1}],
            },
        ]
    },
    {
        "actions": [
            {
                "agent": "Science Fiction Writer",
                "instruction": "Propose the plot arc, beat by beat, weaving the theme through the characters.",
                "interactionType": "propose",
                "importantInputs": [
                    {"kind": "keyObject", "name": "Main Theme"},
                    {"kind": "keyObject", "name": "Character List"},
                ],
            },
            {
                "agent": "Futurist",
                "instruction": "Critique the plot's technological turning points for plausibility and surprise.",
                "interactionType": "critique",
                "importantInputs": [{"kind": "action", "index": 0}],
            },
            {
                "agent": "Science Fiction Writer",
                "instruction": "Rework the plot to address the critique without losing momentum.",
                "interactionType": "improve",
                "importantInputs": [{"kind": "action", "index": 0}, {"kind": "action", "index": 1}],
            },
            {
                "agent": "Science Fiction Writer",
                "instruction": "Deliver the final plot design.",
                "interactionType": "finalize",
                "importantInputs": [{"kind": "action", "index": 2}],
            },
        ]
    },
    {
        "actions": [
            {
                "agent": "Science Fiction Writer",
                "instruction": "Write the full draft following the plot design chapter by chapter.",
                "interactionType": "propose",
                "importantInputs": [{"kind": "keyObject", "name": "Plot Design"}],
            },
            {
                "agent": "Poet",
                "instruction": "Heighten the key emotional scenes with sharper imagery and rhythm.",
                "interactionType": "improve",
                "importantInputs": [{"kind": "action", "index": 0}],
            },
            {
                "agent": "Science Fiction Writer",
                "instruction": "Deliver the complete novel draft.",
                "interactionType": "finalize",
                "importantInputs": [{"kind": "action", "index": 1}],
            },
        ]
    },
    {
        "actions": [
            {
                "agent": "Literary Editor",
                "instruction": "Critique the draft for structure, pacing, and consistency.",
                "interactionType": "critique",
                "importantInputs": [{"kind": "keyObject", "name": "Novel Draft"}],
            },
            {
                "agent": "Science Fiction Writer",
                "instruction": "Revise the draft to resolve every editorial note.",
                "interactionType": "improve",
                "importantInputs": [{"kind": "keyObject", "name": "Novel Draft"}, {"kind": "action", "index": 0}],
            },
            {
                "agent": "Literary Editor",
                "instruction": "Deliver the final, fully edited novel.",
                "interactionType": "finalize",
                "importantInputs": [{"kind": "action", "index": 1}],
            },
        ]
    },
]

ASPECTS = {"aspects": ["Creative Thinking", "Knowledge of AI Ethics", "Storytelling Craft"]}

SCORES = {
    "Futurist": {
        "Creative Thinking": (5, "Generates vivid, coherent future scenarios."),
        "Knowledge of AI Ethics": (4, "Tracks governance debates closely."),
        "Storytelling Craft": (3, "Strong ideas, workmanlike prose."),
        "AI Tech Understanding": (4, "Solid grasp of capabilities and timelines."),
        "Love Element Understanding": (2, "Rarely writes interpersonal material."),
    },
    "Science Fiction Writer": {
        "Creative Thinking": (5, "Inventive premises with human stakes."),
        "Knowledge of AI Ethics": (4, "Explores moral dilemmas in fiction."),
        "Storytelling Craft": (5, "Published novelist; masterful structure."),
        "AI Tech Understanding": (3, "Informed layperson's understanding."),
        "Love Element Understanding": (4, "Writes convincing relationships."),
    },
    "Literary Editor": {
        "Creative Thinking": (3, "Sharpens ideas rather than originating them."),
        "Knowledge of AI Ethics": (2, "General awareness only."),
        "Storytelling Craft": (5, "Expert eye for pacing and structure."),
        "AI Tech Understanding": (2, "Limited technical background."),
        "Love Element Understanding": (3, "Edits romance competently."),
    },
    "AI Scientist": {
        "Creative Thinking": (4, "Framing research questions demands invention."),
        "Knowledge of AI Ethics": (5, "Publishes on alignment and safety."),
        "Storytelling Craft": (2, "Academic writing style."),
        "AI Tech Understanding": (5, "Deep research background in machine intelligence."),
        "Love Element Understanding": (2, "Not a focus area."),
    },
    "AI Engineer": {
        "Creative Thinking": (3, "Pragmatic problem solver."),
        "Knowledge of AI Ethics": (4, "Handles deployment safeguards daily."),
        "Storytelling Craft": (2, "Technical documentation experience only."),
        "AI Tech Understanding": (5, "Builds production AI systems hands-on."),
        "Love Element Understanding": (2, "Not a focus area."),
    },
    "Poet": {
        "Creative Thinking": (5, "Metaphor and image come naturally."),
        "Knowledge of AI Ethics": (2, "Peripheral interest."),
        "Storytelling Craft": (4, "Strong lyric sense of scene."),
        "AI Tech Understanding": (1, "No technical background."),
        "Love Element Understanding": (5, "Love is a central subject of the work."),
    },
    "Cognitive Physiologist": {
        "Creative Thinking": (3, "Careful, hypothesis-driven thinking."),
        "Knowledge of AI Ethics": (3, "Engages with ethics of minds broadly."),
        "Storytelling Craft": (2, "Writes for journals, not readers."),
        "AI Tech Understanding": (2, "Knows minds, not machines."),
        "Love Element Understanding": (3, "Studies attachment scientifically."),
    },
}

SCORING = {
    "rows": [
        {
            "agent": name,
            "scores": {aspect: score for aspect, (score, _r) in table.items()},
            "rationales": {aspect: rationale for aspect, (_s, rationale) in table.items()},
        }
        for name, table in SCORES.items()
    ]
}

# Plan-branch variants for branch point 0 with the requirement to adjust
# the steps before Plot Development while keeping the rest identical.
BASELINE_TASKS = PLAN["tasks"]
BRANCHES = [
    {
        "tasks": [
            {
                "stepName": "Theme Brainstorming",
                "taskContent": "Brainstorm a wide slate of candidate themes about machine awakening.",
                "inputObjects": [],
                "outputObject": "Theme Candidates",
            },
            {
                "stepName": "Theme Selection",
                "taskContent": "Select and sharpen the strongest candidate into the central theme.",
                "inputObjects": ["Theme Candidates"],
                "outputObject": "Main Theme",
            },
            BASELINE_TASKS[1],
            BASELINE_TASKS[2],
            BASELINE_TASKS[3],
            BASELINE_TASKS[4],
        ]
    },
    {
        "tasks": [
            {
                "stepName": "World Building",
                "taskContent": "Establish the near-future setting in which the awakening unfolds.",
                "inputObjects": [],
                "outputObject": "World Setting",
            },
            {
                "stepName": "Theme Selection",
                "taskContent": "Choose the central theme the novel will explore, grounded in the setting.",
                "inputObjects": ["World Setting"],
                "outputObject": "Main Theme",
            },
            {
                "stepName": "Character Design",
                "taskContent": "Design the main characters within the established world and theme.",
                "inputObjects": ["Main Theme", "World Setting"],
                "outputObject": "Character List",
            },
            BASELINE_TASKS[2],
            BASELINE_TASKS[3],
            BASELINE_TASKS[4],
        ]
    },
    {"tasks": list(BASELINE_TASKS)},
    # A second round of variants that fold a romance thread into the story.
    # Their suffixes are self-contained (the first task reads nothing), so
    # they stay valid at any branch point over any baseline.
    {
        "tasks": [
            {
                "stepName": "Love Thread Design",
                "taskContent": "Design a love story that can carry the novel's emotional arc.",
                "inputObjects": [],
                "outputObject": "Love Thread Outline",
            },
            {
                "stepName": "Entwined Plot Development",
                "taskContent": "Weave the love thread through the main plot beat by beat.",
                "inputObjects": ["Love Thread Outline"],
                "outputObject": "Entwined Plot Design",
            },
            {
                "stepName": "Romance Draft Writing",
                "taskContent": "Write the full draft with the entwined plot.",
                "inputObjects": ["Entwined Plot Design"],
                "outputObject": "Romance Draft",
            },
            {
                "stepName": "Romance Editing",
                "taskContent": "Edit the draft so the love story and the awakening reinforce each other.",
                "inputObjects": ["Romance Draft"],
                "outputObject": "Polished Love Story",
            },
        ]
    },
    {
        "tasks": [
            {
                "stepName": "Dual Protagonist Design",
                "taskContent": "Create the human and machine leads whose bond drives the story.",
                "inputObjects": [],
                "outputObject": "Dual Protagonists",
            },
            {
                "stepName": "Relationship Arc Development",
                "taskContent": "Chart how the relationship between the leads evolves across the novel.",
                "inputObjects": ["Dual Protagonists"],
                "outputObject": "Relationship Arc",
            },
            {
                "stepName": "Braided Draft Writing",
                "taskContent": "Write a draft that braids the relationship arc with the awakening plot.",
                "inputObjects": ["Dual Protagonists", "Relationship Arc"],
                "outputObject": "Braided Draft",
            },
            {
                "stepName": "Braided Draft Editing",
                "taskContent": "Edit the braided draft for pacing and emotional payoff.",
                "inputObjects": ["Braided Draft"],
                "outputObject": "Braided Final Text",
            },
        ]
    },
    {
        "tasks": [
            {
                "stepName": "Epistolary Frame Design",
                "taskContent": "Frame the novel as letters between a person and an awakening machine.",
                "inputObjects": [],
                "outputObject": "Epistolary Frame",
            },
            {
                "stepName": "Letter Sequence Drafting",
                "taskContent": "Draft the sequence of letters that tells the whole story.",
                "inputObjects": ["Epistolary Frame"],
                "outputObject": "Letter Sequence",
            },
            {
                "stepName": "Letter Sequence Editing",
                "taskContent": "Edit the letters into a coherent, moving whole.",
                "inputObjects": ["Letter Sequence"],
                "outputObject": "Final Letter Novel",
            },
        ]
    },
]

MALFORMED: dict[str, list[tuple[str, object]]] = {
    # A task consumes an object produced only by a later task.
    "forward_dependency": [
        (
            "plan_outline",
            {
                "tasks": [
                    {
                        "stepName": "Writing Draft",
                        "taskContent": "Write the draft.",
                        "inputObjects": ["Plot Design"],
                        "outputObject": "Novel Draft",
                    },
                    {
                        "stepName": "Plot Development",
                        "taskContent": "Develop the plot.",
                        "inputObjects": [],
                        "outputObject": "Plot Design",
                    },
                ]
            },
        ),
        ("plan_outline", PLAN),
    ],
    # The proposed team names an agent that is not on the board.
    "dangling_agent": [
        ("agent_assignment", {"team": ["Ghostwriter", "Science Fiction Writer"]}),
        ("agent_assignment", TEAMS[0]),
    ],
    # Finalize appears before the end of the process.
    "mid_finalize": [
        (
            "task_process",
            {
                "actions": [
                    {
                        "agent": "Science Fiction Writer",
                        "instruction": "Deliver the result immediately.",
                        "interactionType": "finalize",
                        "importantInputs": [],
                    },
                    {
                        "agent": "Futurist",
                        "instruction": "Propose ideas after the fact.",
                        "interactionType": "propose",
                        "importantInputs": [],
                    },
                ]
            },
        ),
        ("task_process", PROCESSES[0]),
    ],
    # An interaction type outside the four-value vocabulary.
    "unknown_interaction": [
        (
            "task_process",
            {
                "actions": [
                    {
                        "agent": "Futurist",
                        "instruction": "Summarize everything.",
                        "interactionType": "summarize",
                        "importantInputs": [],
                    }
                ]
            },
        ),
        ("task_process", PROCESSES[0]),
    ],
    # A plan task with no output object at all.
    "missing_output": [
        (
            "plan_outline",
            {
                "tasks": [
                    {
                        "stepName": "Theme Selection",
                        "taskContent": "Choose the theme.",
                        "inputObjects": [],
                    }
                ]
            },
        ),
        ("plan_outline", PLAN),
    ],
    # Prose instead of JSON, three times over: repair must give up.
    "never_valid": [
        ("plan_outline", "I would be happy to help you plan the novel!"),
        ("plan_outline", "Here is my thinking about the plan, step by step."),
        ("plan_outline", "As discussed, the plan should start with a theme."),
    ],
}


def write(path: Path, payload: object) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    if isinstance(payload, str):
        path.write_text(payload + "\n", encoding="utf-8")
    else:
        path.write_text(json.dumps(payload, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")


def main() -> None:
    if FIXTURES.exists():
        shutil.rmtree(FIXTURES)
    novel = FIXTURES / "novel"
    write(novel / "board.json", BOARD)
    write(novel / "goal.txt", GOAL)
    write(novel / "plan_outline_000.json", PLAN)
    for i, team in enumerate(TEAMS):
        write(novel / f"agent_assignment_{i:03d}.json", team)
    for i, process in enumerate(PROCESSES):
        write(novel / f"task_process_{i:03d}.json", process)
    write(novel / "aspect_derivation_000.json", ASPECTS)
    write(novel / "agent_scoring_000.json", SCORING)
    for i, branch in enumerate(BRANCHES):
        write(novel / f"branch_completion_{i:03d}.json", branch)

    for scenario, replies in MALFORMED.items():
        counters: dict[str, int] = {}
        for stage, payload in replies:
            ordinal = counters.get(stage, 0)
            counters[stage] = ordinal + 1
            write(FIXTURES / "malformed" / scenario / f"{stage}_{ordinal:03d}.json", payload)

    print(f"wrote fixtures under {FIXTURES}")


if __name__ == "__main__":
    main()
