import init, { synthesize, orientation, extract } from "./pkg/fpid_web.js";

const $ = (id) => document.getElementById(id);
const state = { pixels: null, width: 0, height: 0, field: null };

function status(msg, isError = false) {
  const el = $("status");
  el.textContent = msg;
  el.className = isError ? "err" : "";
}

function drawGray(canvas, pixels, width, height, scale = 2) {
  canvas.width = width * scale;
  canvas.height = height * scale;
  const ctx = canvas.getContext("2d");
  const data = new ImageData(width, height);
  for (let i = 0; i < pixels.length; i++) {
    data.data[4 * i] = data.data[4 * i + 1] = data.data[4 * i + 2] = pixels[i];
    data.data[4 * i + 3] = 255;
  }
  const tmp = new OffscreenCanvas(width, height);
  tmp.getContext("2d").putImageData(data, 0, 0);
  ctx.imageSmoothingEnabled = false;
  ctx.drawImage(tmp, 0, 0, canvas.width, canvas.height);
  return ctx;
}

function drawInput() {
  const scale = 2;
  const ctx = drawGray($("input"), state.pixels, state.width, state.height, scale);
  const f = state.field;
  if (!f) return;
  ctx.lineWidth = 1.5;
  const half = f.block_size * 0.45 * scale;
  for (let r = 0; r < f.blocks_y; r++) {
    for (let c = 0; c < f.blocks_x; c++) {
      const i = r * f.blocks_x + c;
      const theta = f.angles[i];
      const cx = (c + 0.5) * f.block_size * scale;
      const cy = (r + 0.5) * f.block_size * scale;
      const dx = Math.cos(theta) * half;
      const dy = Math.sin(theta) * half;
      ctx.strokeStyle = `rgba(0, 120, 255, ${0.25 + 0.75 * f.coherences[i]})`;
      ctx.beginPath();
      ctx.moveTo(cx - dx, cy - dy);
      ctx.lineTo(cx + dx, cy + dy);
      ctx.stroke();
    }
  }
  ctx.strokeStyle = f.core.fallback ? "orange" : "red";
  ctx.lineWidth = 2;
  ctx.beginPath();
  ctx.arc(f.core.x * scale, f.core.y * scale, 6 * scale, 0, 2 * Math.PI);
  ctx.stroke();
}

function setImage(pixels, width, height) {
  Object.assign(state, { pixels, width, height, field: null });
  drawInput();
  for (const id of ["region", "enhanced"]) $(id).width = $(id).height = 0;
  $("features").tBodies[0].innerHTML = "";
}

function run(label, fn) {
  try {
    const t0 = performance.now();
    fn();
    status(`${label} in ${(performance.now() - t0).toFixed(0)} ms`);
  } catch (e) {
    status(`${label} failed: ${e}`, true);
  }
}

function loadFile(file) {
  const img = new Image();
  img.onload = () => {
    const side = 512;
    const scale = Math.min(1, side / Math.max(img.width, img.height));
    const w = Math.round(img.width * scale);
    const h = Math.round(img.height * scale);
    const c = new OffscreenCanvas(w, h);
    const ctx = c.getContext("2d");
    ctx.drawImage(img, 0, 0, w, h);
    const rgba = ctx.getImageData(0, 0, w, h).data;
    const gray = new Uint8Array(w * h);
    for (let i = 0; i < gray.length; i++) {
      gray[i] = Math.round(0.299 * rgba[4 * i] + 0.587 * rgba[4 * i + 1] + 0.114 * rgba[4 * i + 2]);
    }
    setImage(gray, w, h);
    status(`loaded ${file.name} (${w}x${h})`);
    URL.revokeObjectURL(img.src);
  };
  img.onerror = () => status(`cannot decode ${file.name}`, true);
  img.src = URL.createObjectURL(file);
}

function showFeatures(view) {
  const body = $("features").tBodies[0];
  body.innerHTML = "";
  // attributes are ordered descriptor-major, four angles each
  for (let d = 0; d < view.values.length / 4; d++) {
    const tr = document.createElement("tr");
    const name = view.attributes[4 * d].replace(/_d_avg_a0$/, "");
    tr.innerHTML = `<td>${name}</td>` +
      [0, 1, 2, 3].map((a) => `<td>${view.values[4 * d + a].toFixed(4)}</td>`).join("");
    body.appendChild(tr);
  }
}

await init();

$("synth").onclick = () => run("synthesized", () => {
  const size = Number($("size").value);
  setImage(synthesize(Number($("seed").value) >>> 0, size), size, size);
});

$("file").onchange = (e) => e.target.files[0] && loadFile(e.target.files[0]);

$("orient").onclick = () => run("orientation field", () => {
  if (!state.pixels) throw "no image";
  state.field = JSON.parse(orientation(state.pixels, state.width, state.height, Number($("block").value)));
  drawInput();
});

$("extract").onclick = () => run("extraction", () => {
  if (!state.pixels) throw "no image";
  const view = JSON.parse(extract(state.pixels, state.width, state.height,
    Number($("steps").value), Number($("levels").value)));
  drawGray($("region"), view.region, view.side, view.side, 3);
  drawGray($("enhanced"), view.enhanced, view.side, view.side, 3);
  showFeatures(view);
});

$("synth").click();
