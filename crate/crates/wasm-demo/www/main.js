import init, { whatif, plan, check } from "./pkg/misra_triage_wasm.js";

const SETS = [
  "LTLM", "DEVM", "CTIS", "RTIS", "DOCU", "ENMO", "HTDR", "EAPI",
  "BAPI", "PORT", "CTIL", "RTIL", "TNTI", "IRRC", "TYPM", "CSTR",
];

const SAMPLE_FINDINGS = [
  { tool: "demo", guideline: "R9.1", file: "src/main.c", line: 12, message: "read of uninitialized variable" },
  { tool: "demo", guideline: "R6.1", file: "src/reg.h", line: 4, message: "bit-field declared with plain int" },
  { tool: "demo", guideline: "R16.1", file: "src/fsm.c", line: 40, message: "switch statement not well-formed" },
  { tool: "demo", guideline: "D4.12", file: "src/pool.c", line: 7, message: "call to malloc" },
  { tool: "demo", guideline: "D4.6", file: "src/types.h", line: 3, message: "basic numerical type used" },
  { tool: "demo", guideline: "R10.1", file: "src/math.c", line: 22, message: "operand of inappropriate essential type" },
  { tool: "demo", guideline: "D1.1", file: "doc/impl.md", line: 1, message: "implementation-defined behavior not documented" },
  { tool: "demo", guideline: "R8.6", file: "src/a.c", line: 2, message: "external identifier defined twice" },
  { tool: "demo", guideline: "R12.5", file: "src/buf.c", line: 18, message: "sizeof on array parameter" },
].map((f) => JSON.stringify(f)).join("\n");

const SAMPLE_SOURCE = `/* Ring buffer API. */
#define _RING_SIZE 64

struct ring { unsigned char data[_RING_SIZE]; int head; };
int ring_push(struct ring *r, unsigned char b);
const char *name = "_not_reported";
`;

const $ = (id) => document.getElementById(id);

function element(tag, text, className) {
  const e = document.createElement(tag);
  if (text !== undefined) e.textContent = text;
  if (className) e.className = className;
  return e;
}

function selectedSets() {
  return [...document.querySelectorAll("#sets input:checked")].map((i) => i.value).join(",");
}

function selectedObjectives() {
  return [...document.querySelectorAll("#objectives input:checked")].map((i) => i.value).join(",");
}

function showError(target, err) {
  target.replaceChildren(element("span", String(err.message ?? err), "error"));
}

function refreshWhatIf() {
  try {
    const { report, diagnostics } = JSON.parse(whatif($("findings").value, selectedSets()));
    $("in-scope").textContent = report.in_scope_count;
    $("out-scope").textContent = report.out_of_scope_count;
    $("diagnostics").textContent = diagnostics.length ? diagnostics.join("; ") : "";
  } catch (err) {
    showError($("diagnostics"), err);
  }
}

function refreshPlan() {
  const body = $("plan").querySelector("tbody");
  try {
    const { plan: p } = JSON.parse(plan($("findings").value, $("strategy").value, selectedObjectives()));
    body.replaceChildren(...p.phases.map((phase, i) => {
      const row = element("tr");
      row.append(element("td", i + 1), element("td", phase.label), element("td", phase.sets.join(", ")));
      const cell = element("td");
      cell.append(element("strong", phase.distinct));
      for (const f of phase.findings) cell.append(element("div", `${f.guideline} ${f.file}:${f.line}`, "muted"));
      row.append(cell);
      return row;
    }));
  } catch (err) {
    const row = element("tr");
    const cell = element("td");
    cell.colSpan = 4;
    showError(cell, err);
    row.append(cell);
    body.replaceChildren(row);
  }
}

function refreshCheck() {
  const result = JSON.parse(check($("path").value, $("source").value));
  const items = result.findings.map((f) => element("li", `${f.guideline} ${f.line}:${f.column}  ${f.message}`));
  for (const e of result.lex_errors) items.push(element("li", `${e.kind} at ${e.line}:${e.column}`, "error"));
  if (!items.length) items.push(element("li", "no findings", "muted"));
  $("check-results").replaceChildren(...items);
}

function refreshFindings() {
  refreshWhatIf();
  refreshPlan();
}

async function main() {
  await init();
  for (const code of SETS) {
    const label = element("label");
    const box = element("input");
    box.type = "checkbox";
    box.value = code;
    box.addEventListener("change", refreshWhatIf);
    label.append(box, ` ${code}`);
    $("sets").append(label);
  }
  $("findings").value = SAMPLE_FINDINGS;
  $("source").value = SAMPLE_SOURCE;
  $("findings").addEventListener("input", refreshFindings);
  $("strategy").addEventListener("change", refreshPlan);
  for (const box of document.querySelectorAll("#objectives input")) box.addEventListener("change", refreshPlan);
  $("source").addEventListener("input", refreshCheck);
  $("path").addEventListener("input", refreshCheck);
  refreshFindings();
  refreshCheck();
}

main();
