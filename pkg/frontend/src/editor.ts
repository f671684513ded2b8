/**
 * Editor abstraction: everything the command needs from the host.  A real
 * extension implements this against the editor API; tests use an in-memory
 * fake.  Keeping the surface this small means no editor module is imported
 * anywhere in the testable code.
 */

import { ClientSettings } from "./core.js";

export interface WorkspaceFile {
  path: string;
  content: string;
}

export interface EditorHost {
  /** Folder name of the open workspace, used as the project name. */
  workspaceName(): string;

  /** Every file in the workspace as relative path plus text content. */
  listWorkspaceFiles(): Promise<WorkspaceFile[]>;

  settings(): ClientSettings;

  /** Show a transient progress note while the service call runs. */
  showProgress(message: string): void;

  /** Open generated markdown in a preview buffer for review. */
  showPreview(markdown: string): Promise<void>;

  /** Ask a yes/no question; resolves false when dismissed. */
  confirm(question: string): Promise<boolean>;

  notifyError(message: string): void;

  notifyInfo(message: string): void;

  fileExists(relativePath: string): Promise<boolean>;

  writeFile(relativePath: string, content: string): Promise<void>;
}
