import type { FieldView, FormController } from "./controller.js";

// DOM glue. All decisions live in FormController; this file only projects
// controller state into elements and feeds input events back.

function fieldControl(view: FieldView, controller: FormController): HTMLElement {
  const row = document.createElement("div");
  row.className = `field state-${view.state}`;
  row.dataset.field = view.id;

  const label = document.createElement("label");
  label.htmlFor = `input-${view.id}`;
  label.textContent = view.label;
  if (view.mandatory) {
    const star = document.createElement("span");
    star.className = "mandatory-mark";
    star.title = "mandatory: no rule can derive this field";
    star.textContent = " *";
    label.appendChild(star);
  }
  row.appendChild(label);

  let input: HTMLInputElement | HTMLSelectElement;
  if (view.kind === "enum") {
    const select = document.createElement("select");
    const blank = document.createElement("option");
    blank.value = "";
    blank.textContent = "—";
    select.appendChild(blank);
    for (const option of view.values ?? []) {
      const el = document.createElement("option");
      el.value = option;
      el.textContent = option;
      select.appendChild(el);
    }
    select.value = view.state === "user" ? view.display : "";
    input = select;
  } else {
    const text = document.createElement("input");
    text.type = "text";
    text.inputMode = "decimal";
    text.value = view.display;
    if (view.min !== undefined || view.max !== undefined) {
      text.placeholder = `${view.min ?? ""}..${view.max ?? ""}`;
    }
    input = text;
  }
  input.id = `input-${view.id}`;
  input.classList.add("control");
  if (view.state === "derived") {
    input.classList.add("derived");
  }
  input.addEventListener("input", () => {
    controller.setField(view.id, input.value);
  });
  // editing a ghosted value starts from scratch rather than adopting it
  input.addEventListener("focus", () => {
    if (view.state === "derived" && input instanceof HTMLInputElement) {
      input.select();
    }
  });
  row.appendChild(input);

  const badges = document.createElement("span");
  badges.className = "badges";
  if (view.state === "derived") {
    badges.appendChild(badge("derived", "badge-derived"));
  }
  if (view.suggested) {
    badges.appendChild(badge("suggested", "badge-suggested"));
  }
  row.appendChild(badges);

  if (view.error) {
    const msg = document.createElement("div");
    msg.className = "field-error";
    msg.textContent = view.error;
    row.appendChild(msg);
  }
  return row;
}

function badge(text: string, cls: string): HTMLElement {
  const el = document.createElement("span");
  el.className = `badge ${cls}`;
  el.textContent = text;
  return el;
}

export function mount(root: HTMLElement, controller: FormController): void {
  let showDerived = true;

  const render = () => {
    root.textContent = "";

    const heading = document.createElement("h1");
    heading.textContent = controller.formName || "form";
    root.appendChild(heading);

    const banner = document.createElement("div");
    banner.className = `banner banner-${controller.banner.kind}`;
    banner.textContent = controller.banner.text;
    root.appendChild(banner);

    const toggleRow = document.createElement("div");
    toggleRow.className = "derived-toggle";
    const toggle = document.createElement("input");
    toggle.type = "checkbox";
    toggle.id = "show-derived";
    toggle.checked = showDerived;
    toggle.addEventListener("change", () => {
      showDerived = toggle.checked;
      render();
    });
    const toggleLabel = document.createElement("label");
    toggleLabel.htmlFor = "show-derived";
    toggleLabel.textContent = "show derived values";
    toggleRow.append(toggle, toggleLabel);
    root.appendChild(toggleRow);

    const form = document.createElement("div");
    form.className = "fields";
    for (const view of controller.views) {
      const projected =
        !showDerived && view.state === "derived"
          ? { ...view, display: "" }
          : view;
      form.appendChild(fieldControl(projected, controller));
    }
    root.appendChild(form);

    if (controller.panel.length > 0) {
      const aside = document.createElement("aside");
      aside.className = "graph-panel";
      const title = document.createElement("h2");
      title.textContent = "dependencies";
      aside.appendChild(title);
      for (const line of controller.panel) {
        const p = document.createElement("p");
        p.textContent = line;
        aside.appendChild(p);
      }
      root.appendChild(aside);
    }
  };

  controller.subscribe(render);
  render();
}
