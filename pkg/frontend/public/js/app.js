import { ApiClient } from "./api.js";
import { FormController } from "./controller.js";
import { mount } from "./render.js";
const root = document.querySelector("#app");
if (!root) {
    throw new Error("missing #app element");
}
const controller = new FormController(new ApiClient());
mount(root, controller);
void controller.load();
