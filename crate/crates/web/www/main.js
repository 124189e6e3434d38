import init, { render_triangle, check_tp, partition_to_word, word_to_partition } from "./pkg/tptri_web.js";

const FAMILIES = ["eulerian", "rev-stirling", "general4", "general6", "ace-seq", "alt-i", "alt-ii", "planted"];
const $ = (id) => document.getElementById(id);

function fail(el, e) {
  el.className = "err";
  el.textContent = String(e.message ?? e);
}

function renderTable(el, rows) {
  const table = document.createElement("table");
  rows.forEach((row, n) => {
    const tr = table.insertRow();
    tr.insertCell().textContent = n;
    row.forEach((entry) => (tr.insertCell().textContent = entry));
  });
  el.replaceChildren(table);
}

await init();

for (const id of ["tri-family", "tp-family"]) {
  for (const f of FAMILIES) $(id).add(new Option(f, f));
}
$("tp-family").value = "general6";

$("tri-go").onclick = () => {
  const out = $("tri-out");
  try {
    const doc = JSON.parse(render_triangle($("tri-family").value, $("tri-params").value, +$("tri-nmax").value));
    out.className = "";
    renderTable(out, doc.rows);
  } catch (e) {
    fail(out, e);
  }
};

$("tp-go").onclick = () => {
  const out = $("tp-out");
  out.className = "";
  out.textContent = "checking...";
  // let the message paint before the synchronous check
  setTimeout(() => {
    try {
      const t0 = performance.now();
      const body = JSON.parse(check_tp($("tp-family").value, $("tp-params").value, +$("tp-n").value));
      const ms = (performance.now() - t0).toFixed(0);
      out.textContent = `${body.status}: ${body.minors_checked} of ${body.minors_total} minors (${ms} ms)\n\n`
        + JSON.stringify(body, null, 2);
    } catch (e) {
      fail(out, e);
    }
  }, 0);
};

$("bij-to-word").onclick = () => {
  const out = $("bij-out");
  try {
    const r = JSON.parse(partition_to_word($("bij-partition").value));
    $("bij-word").value = r.word;
    $("bij-n").value = r.n;
    $("bij-k").value = r.k;
    out.className = "";
    out.textContent = `order ${r.order.join(" ")}\nword  ${r.word}\n(n, k) = (${r.n}, ${r.k})`;
  } catch (e) {
    fail(out, e);
  }
};

$("bij-to-partition").onclick = () => {
  const out = $("bij-out");
  try {
    const r = JSON.parse(word_to_partition($("bij-word").value, +$("bij-n").value, +$("bij-k").value));
    $("bij-partition").value = r.partition;
    out.className = "";
    out.textContent = `partition ${r.partition}\norder     ${r.order.join(" ")}`;
  } catch (e) {
    fail(out, e);
  }
};
