/** Application shell: mounts the workbench and the baseline chat view. */

import { ApiClient } from "./api.js";
import { ChatPane } from "./chatpane.js";
import { el } from "./util.js";
import { Workbench } from "./workbench.js";

export interface App {
  workbench: Workbench;
  chat: ChatPane;
}

export async function mountApp(root: HTMLElement, baseUrl: string): Promise<App> {
  const api = new ApiClient(baseUrl);

  const workbenchRoot = el("div", { attrs: { id: "workbench-root" } });
  const chatRoot = el("div", { attrs: { id: "chat-root", hidden: "" } });
  const workbenchTab = el("button", {
    text: "Workbench",
    attrs: { id: "tab-workbench" },
  });
  const chatTab = el("button", { text: "Chat", attrs: { id: "tab-chat" } });
  const switcher = el("nav", { attrs: { id: "view-switcher" } }, [
    workbenchTab,
    chatTab,
  ]);
  const toasts = el("div", { attrs: { id: "toasts" } });
  root.append(switcher, workbenchRoot, chatRoot, toasts);

  workbenchTab.addEventListener("click", () => {
    workbenchRoot.hidden = false;
    chatRoot.hidden = true;
  });
  chatTab.addEventListener("click", () => {
    workbenchRoot.hidden = true;
    chatRoot.hidden = false;
  });

  const workbench = new Workbench(api, workbenchRoot);
  const chat = new ChatPane(api, chatRoot);
  await workbench.load();
  await chat.refresh();
  return { workbench, chat };
}
