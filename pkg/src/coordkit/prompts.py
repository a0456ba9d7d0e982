"""Prompt templates for the generation stages.

Bodies are authored here; placeholders use ``{{name}}`` markers so JSON
examples inside the text never collide with the substitution syntax.
"""

from __future__ import annotations

from .gateway import PromptTemplate, Stage

PLAN_OUTLINE_TEMPLATE = PromptTemplate(
    stage=Stage.PLAN_OUTLINE,
    schema_id="plan-outline/v1",
    body=(
        "You are an expert plan outline designer. Carefully analyze the collaboration goal\n"
        "and decompose it into a sequence of step tasks carried out one after the other.\n"
        "\n"
        "Goal: {{goal}}\n"
        "Initial key objects (already available as inputs):\n{{initial_objects}}\n"
        "\n"
        "Each task must name its input key objects (initial objects or outputs of earlier\n"
        "steps only) and exactly one new output key object. Output names must be unique.\n"
        "\n"
        "Reply with a JSON document only, shaped as:\n"
        '{"tasks": [{"stepName": "...", "taskContent": "...", "inputObjects": ["..."], "outputObject": "..."}]}\n'
    ),
)

AGENT_ASSIGNMENT_TEMPLATE = PromptTemplate(
    stage=Stage.AGENT_ASSIGNMENT,
    schema_id="agent-assignment/v1",
    body=(
        "You are an expert manager that analyzes the aspects of ability needed for a task\n"
        "and picks the most suitable team from a board of candidate agents.\n"
        "\n"
        "Goal: {{goal}}\n"
        "Task: {{task_name}} - {{task_content}}\n"
        "Agent board (name: expertise profile):\n{{board}}\n"
        "\n"
        "Select the agents (by exact name) that should collaborate on this task.\n"
        'Reply with a JSON document only, shaped as: {"team": ["Agent Name"]}\n'
    ),
)

TASK_PROCESS_TEMPLATE = PromptTemplate(
    stage=Stage.TASK_PROCESS,
    schema_id="task-process/v1",
    body=(
        "You are an expert collaboration coordinator. Carefully read the profile of each\n"
        "agent assigned to the task and specify the ordered process of actions through\n"
        "which they complete it together.\n"
        "\n"
        "Goal: {{goal}}\n"
        "Task: {{task_name}} - {{task_content}}\n"
        "Task input key objects: {{task_inputs}}\n"
        "Assigned team profiles:\n{{team_profiles}}\n"
        "\n"
        "Each action names its agent, an instruction telling the agent what and how to do,\n"
        "an interaction type (propose | critique | improve | finalize), and its important\n"
        "inputs: task input key objects or results of earlier actions that matter for this\n"
        "action. Exactly one finalize action delivers the task result and must come last.\n"
        "\n"
        "Reply with a JSON document only, shaped as:\n"
        '{"actions": [{"agent": "...", "instruction": "...", "interactionType": "propose",'
        ' "importantInputs": [{"kind": "keyObject", "name": "..."}, {"kind": "action", "index": 0}]}]}\n'
    ),
)

ASPECT_DERIVATION_TEMPLATE = PromptTemplate(
    stage=Stage.ASPECT_DERIVATION,
    schema_id="aspect-derivation/v1",
    body=(
        "You are an expert manager preparing to staff a task. Name the three capabilities\n"
        "you deem most important for completing it. Keep each name under six words.\n"
        "\n"
        "Goal: {{goal}}\n"
        "Task: {{task_name}} - {{task_content}}\n"
        "\n"
        'Reply with a JSON document only, shaped as: {"aspects": ["...", "...", "..."]}\n'
    ),
)

AGENT_SCORING_TEMPLATE = PromptTemplate(
    stage=Stage.AGENT_SCORING,
    schema_id="agent-scoring/v1",
    body=(
        "You are an expert manager. For the task below, score how likely each agent on the\n"
        "board is to possess each listed capability, as an integer from 1 (unlikely) to 5\n"
        "(very likely), and give a one-sentence reason per score.\n"
        "\n"
        "Goal: {{goal}}\n"
        "Task: {{task_name}} - {{task_content}}\n"
        "Capabilities: {{aspects}}\n"
        "Agent board (name: expertise profile):\n{{board}}\n"
        "\n"
        "Score every agent on every capability. Reply with a JSON document only, shaped as:\n"
        '{"rows": [{"agent": "...", "scores": {"Capability": 3}, "rationales": {"Capability": "..."}}]}\n'
    ),
)

PLAN_BRANCH_TEMPLATE = PromptTemplate(
    stage=Stage.BRANCH_COMPLETION,
    schema_id="plan-branch/v1",
    body=(
        "You are an expert plan outline designer exploring alternatives to a baseline plan.\n"
        "\n"
        "Goal: {{goal}}\n"
        "Initial key objects:\n{{initial_objects}}\n"
        "Baseline plan:\n{{baseline}}\n"
        "\n"
        "The first {{branch_point}} tasks of the baseline are kept verbatim:\n{{prefix}}\n"
        "Design the remaining tasks from that point on, honoring this requirement:\n"
        "{{requirement}}\n"
        "({{variant_hint}})\n"
        "\n"
        "Inputs may reference initial objects, outputs of the kept prefix tasks, or outputs\n"
        "of your own earlier tasks. Reply with a JSON document only, shaped as:\n"
        '{"tasks": [{"stepName": "...", "taskContent": "...", "inputObjects": ["..."], "outputObject": "..."}]}\n'
    ),
)

PROCESS_BRANCH_TEMPLATE = PromptTemplate(
    stage=Stage.BRANCH_COMPLETION,
    schema_id="process-branch/v1",
    body=(
        "You are an expert collaboration coordinator exploring alternatives to a baseline\n"
        "task process.\n"
        "\n"
        "Goal: {{goal}}\n"
        "Task: {{task_name}} - {{task_content}}\n"
        "Task input key objects: {{task_inputs}}\n"
        "Assigned team profiles:\n{{team_profiles}}\n"
        "Baseline process:\n{{baseline}}\n"
        "\n"
        "The first {{branch_point}} actions of the baseline are kept verbatim:\n{{prefix}}\n"
        "Design the remaining actions from that point on, honoring this requirement:\n"
        "{{requirement}}\n"
        "({{variant_hint}})\n"
        "\n"
        "Exactly one finalize action must come last overall. Reply with a JSON document\n"
        "only, shaped as:\n"
        '{"actions": [{"agent": "...", "instruction": "...", "interactionType": "propose",'
        ' "importantInputs": []}]}\n'
    ),
)

ACTION_TEMPLATE = PromptTemplate(
    stage=Stage.ACTION,
    schema_id=None,
    body=(
        "You are {{agent_name}}. {{profile}}\n"
        "\n"
        "The team is pursuing this goal: {{goal}}\n"
        "Current task: {{task_name}} - {{task_content}}\n"
        "\n"
        "Your action ({{interaction}}): {{instruction}}\n"
        "\n"
        "Important input for this action:\n{{inputs}}\n"
        "\n"
        "Reply with the content of your contribution as plain text.\n"
    ),
)
