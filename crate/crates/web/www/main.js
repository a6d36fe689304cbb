import init, { nasm, nonzero_gha, embed } from "./pkg/heffter_web.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

function table(rows, cls) {
  const t = document.createElement("table");
  for (const row of rows) {
    const tr = t.insertRow();
    for (const x of row) {
      const td = tr.insertCell();
      td.textContent = x === 0 ? "" : x;
      if (cls) td.className = cls(x);
    }
  }
  return t;
}

function show(out, f) {
  out.replaceChildren();
  try {
    f(out);
  } catch (e) {
    const p = document.createElement("p");
    p.className = "err";
    p.textContent = String(e);
    out.append(p);
  }
}

function pre(text) {
  const p = document.createElement("pre");
  p.textContent = text;
  return p;
}

await init();

$("nasm-go").onclick = () => show($("nasm-out"), (out) => {
  const r = JSON.parse(nasm(num("nm"), num("nn"), num("nh"), num("nk")));
  out.append(table(r.rows.map((row) => row.map((x) => (x > 0 ? "+" : x < 0 ? "-" : 0))),
    (x) => (x === "+" ? "pos" : x === "-" ? "neg" : "")));
});

$("gha-go").onclick = () => show($("gha-out"), (out) => {
  const r = JSON.parse(nonzero_gha(num("gv"), $("gs").value, num("gm"), num("gn")));
  out.append(table(r.rows));
  out.append(pre(
    `verdict: ${r.verdict}, simple: ${r.simple}\n` +
    r.row_partial_sums.map((s, i) => `row ${i}: ${s.join(" ")}`).join("\n") + "\n" +
    r.col_partial_sums.map((s, j) => `col ${j}: ${s.join(" ")}`).join("\n")));
});

$("embed-go").onclick = () => show($("embed-out"), (out) => {
  const r = JSON.parse(embed($("et").value, num("eb")));
  if (!r.found) {
    out.append(pre(`no compatible ordering: ${JSON.stringify(r.search)}`));
    return;
  }
  const comps = r.components.map((c) => `V=${c.vertices} E=${c.edges} F=${c.faces} genus=${c.genus}`);
  const faces = r.faces.map((f) => `${f.class}: (${f.vertices.join(" ")})`);
  out.append(pre(`valid: ${r.valid}, ordering found after ${r.tried} tries\n` +
    `rho0: ${r.rho0.join(" ")}\n${comps.join("\n")}\n\n${faces.join("\n")}`));
});
