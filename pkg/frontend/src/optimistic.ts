/** Optimistic UI update: apply immediately, roll back if the call fails. */

import { toast } from "./util.js";

export async function withOptimistic<T>(options: {
  apply: () => void;
  call: () => Promise<T>;
  rollback: () => void;
}): Promise<T | undefined> {
  options.apply();
  try {
    return await options.call();
  } catch (error) {
    options.rollback();
    toast(error instanceof Error ? error.message : String(error));
    return undefined;
  }
}
