// Plain-text dependency summary shown next to the form. Everything here is
// presentation over the analysis document; the wording of the hint line is
// covered by tests because it is the part users act on.
function formatSet(ids) {
    return `{${ids.join(", ")}}`;
}
function intersection(sets) {
    if (sets.length === 0)
        return [];
    return sets[0].filter((id) => sets.every((s) => s.includes(id)));
}
export function entryHint(analysis, fieldCount) {
    const sets = analysis.exact_min_fillings ?? [analysis.greedy_min_filling];
    const singleton = sets.find((s) => s.length === 1);
    if (singleton) {
        return `entering ${singleton[0]} alone suffices`;
    }
    if (sets.length === 1 && sets[0].length === fieldCount) {
        return "all fields required";
    }
    const common = intersection(sets);
    const options = Array.from(new Set(sets.flatMap((s) => s.filter((id) => !common.includes(id))))).sort();
    const oneExtraEach = sets.every((s) => s.length === common.length + 1);
    if (common.length > 0 && oneExtraEach && options.length > 0) {
        return `enter ${common.join(" and ")} plus one of ${formatSet(options)}`;
    }
    return `smallest entry sets: ${sets.map(formatSet).join(", ")}`;
}
export function panelLines(analysis, fieldCount) {
    const lines = [];
    lines.push(analysis.mandatory.length > 0
        ? `mandatory: ${analysis.mandatory.join(", ")}`
        : "mandatory: (none)");
    lines.push(analysis.minimal_cycles.length > 0
        ? `cycles: ${analysis.minimal_cycles
            .map((c) => formatSet(c.members))
            .join(", ")}`
        : "cycles: (none)");
    if (analysis.exact_min_fillings) {
        lines.push(`minimal entry sets: ${analysis.exact_min_fillings
            .map(formatSet)
            .join(", ")}`);
    }
    else {
        lines.push(`entry set (greedy): ${formatSet(analysis.greedy_min_filling)}`);
    }
    lines.push(entryHint(analysis, fieldCount));
    return lines;
}
