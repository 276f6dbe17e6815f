import { HttpServiceClient } from "./client.js";
import { renderApp } from "./dom.js";
import { ViewerModel } from "./model.js";
const SESSION_POLL_MS = 2000;
function bootstrap() {
    const root = document.getElementById("app");
    if (!root)
        throw new Error("missing #app element");
    const base = (root.dataset.service ?? "").replace(/\/$/, "");
    const model = new ViewerModel(new HttpServiceClient(base));
    model.onChange(() => renderApp(root, model));
    void model.refresh();
    setInterval(() => {
        if (!model.busy)
            void model.refresh();
    }, SESSION_POLL_MS);
}
bootstrap();
