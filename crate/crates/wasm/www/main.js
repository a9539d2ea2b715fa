import init, { schedule_json, round_svg, verify_json } from "./pkg/tandem_wasm.js";

const el = (id) => document.getElementById(id);
const errorBox = el("error");

function run(action) {
  errorBox.textContent = "";
  try {
    action();
  } catch (e) {
    errorBox.textContent = String(e);
  }
}

function currentN() {
  return Number(el("n").value);
}

await init();

el("generate").addEventListener("click", () =>
  run(() => {
    el("document").value = schedule_json(currentN(), el("mode").value);
  })
);

el("draw").addEventListener("click", () =>
  run(() => {
    const svg = round_svg(
      currentN(),
      el("mode").value,
      Number(el("division").value),
      Number(el("round").value)
    );
    el("drawing").innerHTML = svg;
  })
);

el("verify").addEventListener("click", () =>
  run(() => {
    const doc = el("document").value.trim();
    if (!doc) {
      throw new Error("paste or generate a schedule document first");
    }
    el("report").textContent = verify_json(doc);
  })
);
