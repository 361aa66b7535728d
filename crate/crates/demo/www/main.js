import init, { remez_curve, determinant_sign_map, polyharmonic_field } from "./pkg/chebsys_demo.js";

const $ = (id) => document.getElementById(id);

function plotLines(canvas, series, colors) {
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  ctx.clearRect(0, 0, w, h);
  const xs = series[0].map((p) => p[0]);
  const ys = series.flatMap((s) => s.map((p) => p[1]));
  const [x0, x1] = [Math.min(...xs), Math.max(...xs)];
  let [y0, y1] = [Math.min(...ys), Math.max(...ys)];
  if (y1 - y0 < 1e-300) { y0 -= 1; y1 += 1; }
  const pad = 10;
  const px = (x) => pad + ((x - x0) / (x1 - x0)) * (w - 2 * pad);
  const py = (y) => h - pad - ((y - y0) / (y1 - y0)) * (h - 2 * pad);
  ctx.strokeStyle = "#ddd";
  ctx.beginPath(); ctx.moveTo(pad, py(0)); ctx.lineTo(w - pad, py(0)); ctx.stroke();
  series.forEach((s, i) => {
    ctx.strokeStyle = colors[i];
    ctx.beginPath();
    s.forEach(([x, y], k) => (k ? ctx.lineTo(px(x), py(y)) : ctx.moveTo(px(x), py(y))));
    ctx.stroke();
  });
  return { px, py };
}

function drawRemez() {
  const degree = Number($("remez-degree").value);
  $("remez-degree-out").textContent = degree;
  const r = JSON.parse(remez_curve($("remez-target").value, degree, 801));
  if (r.error) { $("remez-info").textContent = r.error; return; }
  const f = r.curve.map(([t, ft]) => [t, ft]);
  const u = r.curve.map(([t, , ut]) => [t, ut]);
  plotLines($("remez-fn"), [f, u], ["#222", "#d33"]);
  const err = r.curve.map(([t, ft, ut]) => [t, ft - ut]);
  const band = [[-1, r.delta], [1, r.delta]];
  const nband = [[-1, -r.delta], [1, -r.delta]];
  const { px, py } = plotLines($("remez-err"), [err, band, nband], ["#36c", "#aaa", "#aaa"]);
  const ctx = $("remez-err").getContext("2d");
  ctx.fillStyle = "#d33";
  r.reference.forEach(([t, e]) => { ctx.beginPath(); ctx.arc(px(t), py(e), 3, 0, 2 * Math.PI); ctx.fill(); });
  $("remez-info").textContent =
    `max error ${r.delta.toExponential(6)} after ${r.iterations} exchange steps` + (r.converged ? "" : " (not converged)");
}

function drawSignMap() {
  const hw = Number($("det-width").value);
  $("det-width-out").textContent = hw;
  const n = 140;
  const r = JSON.parse(determinant_sign_map($("det-family").value, -hw, hw, n));
  const canvas = $("det-map");
  const ctx = canvas.getContext("2d");
  ctx.fillStyle = "#fff";
  ctx.fillRect(0, 0, canvas.width, canvas.height);
  if (r.error) return;
  const cell = canvas.width / n;
  const colors = { 1: "#4a7bd0", "-1": "#d0504a", 0: "#000" };
  r.signs.forEach((s, idx) => {
    if (s === null) return;
    const row = Math.floor(idx / n);
    const col = idx % n;
    ctx.fillStyle = colors[s];
    ctx.fillRect(col * cell, canvas.height - (row + 1) * cell, cell + 0.5, cell + 0.5);
  });
}

function drawField() {
  const order = Number($("ph-order").value);
  const mode = Number($("ph-mode").value);
  $("ph-order-out").textContent = order;
  $("ph-mode-out").textContent = mode;
  const n = 160;
  const r = JSON.parse(polyharmonic_field(order, 1.0, mode, n));
  const canvas = $("ph-field");
  const ctx = canvas.getContext("2d");
  const img = ctx.createImageData(n, n);
  const scale = Math.max(Math.abs(r.min), Math.abs(r.max)) || 1;
  r.values.forEach((v, k) => {
    const o = 4 * k;
    if (v === null) { img.data[o + 3] = 0; return; }
    const s = v / scale;
    img.data[o] = s > 0 ? 255 : Math.round(255 * (1 + s));
    img.data[o + 1] = Math.round(255 * (1 - Math.abs(s)));
    img.data[o + 2] = s < 0 ? 255 : Math.round(255 * (1 - s));
    img.data[o + 3] = 255;
  });
  const tmp = new OffscreenCanvas(n, n);
  tmp.getContext("2d").putImageData(img, 0, 0);
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  ctx.imageSmoothingEnabled = true;
  ctx.drawImage(tmp, 0, 0, canvas.width, canvas.height);
  $("ph-info").textContent = `range [${r.min.toFixed(4)}, ${r.max.toFixed(4)}], smallest per-mode singular value ratio ${r.certificate_min.toExponential(3)}`;
}

await init();
for (const id of ["remez-target", "remez-degree"]) $(id).addEventListener("input", drawRemez);
for (const id of ["det-family", "det-width"]) $(id).addEventListener("input", drawSignMap);
for (const id of ["ph-order", "ph-mode"]) $(id).addEventListener("input", drawField);
drawRemez();
drawSignMap();
drawField();
